use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rght::{Grid, VertexAddress, VertexId};

/// Edge list with 1-based ids, one `U V` pair per line. Returns 0-based pairs.
pub fn read_edges(text: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ids: Vec<&str> = line.split_whitespace().collect();
        let [u, v] = ids[..] else {
            return Err(Error::Parse(format!("line {}: expected `U V`", no + 1)));
        };
        out.push((parse_id(u, no)?, parse_id(v, no)?));
    }
    Ok(out)
}

pub fn write_edges(edges: &[(usize, usize)]) -> String {
    let mut out = String::new();
    for &(u, v) in edges {
        writeln!(out, "{} {}", u + 1, v + 1).unwrap();
    }
    out
}

/// Embedding with lines `ID DEPTH ADDR`; the root has an empty address, so
/// the third field may be missing. Ids must cover `1..=n`.
pub fn read_embedding(text: &str, grid: &mut Grid) -> Result<Vec<VertexId>> {
    let mut slots: Vec<Option<VertexId>> = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let (id, depth, addr) = match fields[..] {
            [id, depth] => (id, depth, ""),
            [id, depth, addr] => (id, depth, addr),
            _ => return Err(Error::Parse(format!("line {}: expected `ID DEPTH ADDR`", no + 1))),
        };
        let id = parse_id(id, no)?;
        let depth: u32 = depth.parse().map_err(|_| Error::Parse(format!("line {}: bad depth", no + 1)))?;
        let addr = VertexAddress::from_str(addr)?;
        if addr.0.len() != depth as usize {
            return Err(Error::Parse(format!("line {}: address does not have depth {depth}", no + 1)));
        }
        if slots.len() <= id {
            slots.resize(id + 1, None);
        }
        if slots[id].replace(grid.vertex_at(&addr)?).is_some() {
            return Err(Error::Parse(format!("line {}: vertex {} listed twice", no + 1, id + 1)));
        }
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("vertex {} missing from embedding", i + 1))))
        .collect()
}

pub fn write_embedding(grid: &Grid, positions: &[VertexId]) -> String {
    let mut out = String::new();
    for (i, &v) in positions.iter().enumerate() {
        let line = format!("{} {} {}", i + 1, grid.depth(v), grid.address_of(v));
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    out
}

fn parse_id(s: &str, no: usize) -> Result<usize> {
    match s.parse::<usize>() {
        Ok(id) if id >= 1 => Ok(id - 1),
        _ => Err(Error::Parse(format!("line {}: bad vertex id `{s}`", no + 1))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rght::GridParams;

    #[test]
    fn embedding_round_trip() {
        let mut g = Grid::new(GridParams::new(7, 1, 0)).unwrap();
        let ring = g.ring(3);
        let pos = vec![g.root(), ring[4], ring[17], g.ring(1)[2]];
        let text = write_embedding(&g, &pos);
        assert!(text.starts_with("1 0\n"));
        assert_eq!(read_embedding(&text, &mut g).unwrap(), pos);
    }

    #[test]
    fn edge_round_trip() {
        let e = vec![(0, 3), (1, 2)];
        assert_eq!(read_edges(&write_edges(&e)).unwrap(), e);
        assert!(read_edges("0 1").is_err());
        assert!(read_edges("1 2 3").is_err());
    }

    #[test]
    fn missing_vertex() {
        let mut g = Grid::new(GridParams::new(7, 1, 0)).unwrap();
        assert!(read_embedding("2 0\n", &mut g).is_err());
    }
}
