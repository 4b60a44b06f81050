use crate::error::{Error, Result};

pub type Color = u32;

/// Largest supported template.
pub const MAX_TEMPLATE: usize = 4;
/// Edges of the complete graph on [`MAX_TEMPLATE`] vertices.
pub const MAX_EDGES: usize = 6;

/// A small connected colored graph `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    colors: Vec<Color>,
    edges: Vec<(usize, usize)>,
}

/// A connected subgraph of a template: a vertex set and an edge set, both
/// as bitmasks over template indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgraph {
    pub vertices: u8,
    pub edges: u8,
}

impl Subgraph {
    pub fn contains_vertex(&self, w: usize) -> bool {
        self.vertices >> w & 1 == 1
    }

    pub fn contains_edge(&self, e: usize) -> bool {
        self.edges >> e & 1 == 1
    }
}

impl Template {
    pub fn new(colors: Vec<Color>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = colors.len();
        if n > MAX_TEMPLATE {
            return Err(Error::TemplateTooLarge(n));
        }
        if n == 0 {
            return Err(Error::InvalidTemplate("no vertices".into()));
        }
        let mut seen = Vec::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::InvalidTemplate(format!("edge ({a}, {b}) has an endpoint out of range")));
            }
            if a == b {
                return Err(Error::InvalidTemplate(format!("self-loop at {a}")));
            }
            let key = (a.min(b), a.max(b));
            if seen.contains(&key) {
                return Err(Error::InvalidTemplate(format!("duplicate edge ({a}, {b})")));
            }
            seen.push(key);
        }
        let t = Template { colors, edges };
        let all = (1u8 << n) - 1;
        if !t.is_connected(all, (1u8 << t.edges.len()) - 1) {
            return Err(Error::InvalidTemplate("template is not connected".into()));
        }
        Ok(t)
    }

    pub fn single(k: Color) -> Self {
        Template { colors: vec![k], edges: vec![] }
    }

    pub fn edge(k1: Color, k2: Color) -> Self {
        Template { colors: vec![k1, k2], edges: vec![(0, 1)] }
    }

    /// Path `0 - 1 - 2`.
    pub fn path3(k1: Color, k2: Color, k3: Color) -> Self {
        Template { colors: vec![k1, k2, k3], edges: vec![(0, 1), (1, 2)] }
    }

    /// Edges in the order `(0,1)`, `(1,2)`, `(0,2)`.
    pub fn triangle(k1: Color, k2: Color, k3: Color) -> Self {
        Template { colors: vec![k1, k2, k3], edges: vec![(0, 1), (1, 2), (0, 2)] }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn color(&self, w: usize) -> Color {
        self.colors[w]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn is_connected(&self, vertices: u8, edges: u8) -> bool {
        if vertices == 0 {
            return false;
        }
        let mut reached = 1u8 << vertices.trailing_zeros();
        loop {
            let mut next = reached;
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                if edges >> e & 1 == 1 && (reached >> a & 1 == 1 || reached >> b & 1 == 1) {
                    next |= 1 << a | 1 << b;
                }
            }
            if next == reached {
                return reached == vertices;
            }
            reached = next;
        }
    }

    /// All connected subgraphs, each an arbitrary vertex set with an
    /// arbitrary subset of the edges it spans.
    pub fn subgraphs(&self) -> Vec<Subgraph> {
        let mut out = Vec::new();
        for vertices in 1u8..1 << self.len() {
            let spanned: Vec<usize> = (0..self.edges.len())
                .filter(|&e| {
                    let (a, b) = self.edges[e];
                    vertices >> a & 1 == 1 && vertices >> b & 1 == 1
                })
                .collect();
            for pick in 0u32..1 << spanned.len() {
                let edges = spanned
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| pick >> i & 1 == 1)
                    .fold(0u8, |m, (_, &e)| m | 1 << e);
                if self.is_connected(vertices, edges) {
                    out.push(Subgraph { vertices, edges });
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgraph_counts() {
        assert_eq!(Template::single(0).subgraphs().len(), 1);
        assert_eq!(Template::edge(0, 0).subgraphs().len(), 3);
        assert_eq!(Template::path3(0, 0, 0).subgraphs().len(), 6);
        // singletons, single edges, two-edge paths and the whole triangle
        assert_eq!(Template::triangle(0, 0, 0).subgraphs().len(), 10);
    }

    #[test]
    fn rejects_bad_templates() {
        assert_eq!(Template::new(vec![0; 5], vec![]), Err(Error::TemplateTooLarge(5)));
        assert!(Template::new(vec![0, 0], vec![]).is_err());
        assert!(Template::new(vec![0, 0], vec![(0, 0)]).is_err());
        assert!(Template::new(vec![0, 0], vec![(0, 1), (1, 0)]).is_err());
    }
}
