use num_bigint::BigUint;
use num_traits::{One, Zero};

pub type TypeTag = u16;

/// Local generation rules of a regularly generated triangulation: for each
/// vertex type, the types of its non-rightmost children from left to right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeTable {
    words: Vec<Vec<TypeTag>>,
    parents: Vec<u8>,
    root: TypeTag,
}

impl TypeTable {
    /// Builds a table from explicit child words. Type `root` is the root type;
    /// every other type gets its parent count from its position (leftmost
    /// children below ring 1 have two parents).
    pub fn new(words: Vec<Vec<TypeTag>>, root: TypeTag) -> Result<Self, String> {
        let n = words.len();
        if (root as usize) >= n {
            return Err("root type out of range".into());
        }
        let mut parents = vec![0u8; n];
        parents[root as usize] = 0;
        let mut seen = vec![false; n];
        seen[root as usize] = true;
        let mut stack = vec![root];
        while let Some(t) = stack.pop() {
            let w = &words[t as usize];
            if w.is_empty() {
                return Err(format!("type {t} has an empty child word"));
            }
            for (i, &c) in w.iter().enumerate() {
                if c as usize >= n || c == root {
                    return Err(format!("type {t} has an invalid child type {c}"));
                }
                let p = if t == root || i > 0 { 1 } else { 2 };
                if seen[c as usize] && parents[c as usize] != p {
                    return Err(format!("type {c} occurs with {p} and {} parents", parents[c as usize]));
                }
                parents[c as usize] = p;
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    stack.push(c);
                }
            }
        }
        if let Some(t) = seen.iter().position(|s| !s) {
            return Err(format!("type {t} is unreachable from the root"));
        }
        Ok(TypeTable { words, parents, root })
    }

    /// The {3,q} table: c(0) = 1^q, c(t) = 2 1^(q-4-t) for t in {1,2}.
    pub fn regular(q: u32) -> Self {
        let q = q as usize;
        let mut w1 = vec![2];
        w1.extend(std::iter::repeat_n(1, q - 5));
        let mut w2 = vec![2];
        w2.extend(std::iter::repeat_n(1, q - 6));
        TypeTable::new(vec![vec![1; q], w1, w2], 0).expect("regular table is well formed")
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn root_type(&self) -> TypeTag {
        self.root
    }

    pub fn child_word(&self, t: TypeTag) -> &[TypeTag] {
        &self.words[t as usize]
    }

    pub fn parent_count(&self, t: TypeTag) -> u32 {
        self.parents[t as usize] as u32
    }

    /// Vertex degree: parents, two ring neighbours and all children
    /// (including the rightmost one shared with the successor).
    pub fn degree(&self, t: TypeTag) -> u32 {
        let w = self.words[t as usize].len() as u32;
        if t == self.root {
            w
        } else {
            self.parent_count(t) + 3 + w
        }
    }

    /// True for types whose descendants gain an extra vertex in every
    /// generation: degree-q vertices and degree-6 vertices with one parent.
    pub fn produces_extra_child(&self, t: TypeTag, q: u32) -> bool {
        if t == self.root {
            return false;
        }
        let d = self.degree(t);
        d == q || (d == 6 && self.parent_count(t) == 1)
    }

    /// `m[to][from]`: multiplicity of `to` in the child word of `from`.
    pub fn transition_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.len();
        let mut m = vec![vec![0u64; n]; n];
        for (from, w) in self.words.iter().enumerate() {
            for &to in w {
                m[to as usize][from] += 1;
            }
        }
        m
    }

    /// Number of depth-`k` tree descendants of each type, exactly.
    pub fn descendant_counts(&self, k: u32) -> Vec<BigUint> {
        let mut cur = vec![BigUint::one(); self.len()];
        for _ in 0..k {
            let next = self
                .words
                .iter()
                .map(|w| w.iter().fold(BigUint::zero(), |acc, &c| acc + &cur[c as usize]))
                .collect();
            cur = next;
        }
        cur
    }
}
