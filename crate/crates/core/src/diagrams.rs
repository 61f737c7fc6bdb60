//! Diagram generators producing PD codes: braid closures and pretzel knots.
//!
//! A crossing is a square with ports NW, NE, SW, SE; one diagonal strand is
//! over. Ports are joined by `connect`, the single component is traversed
//! starting from crossing 0's SE port, and edges are labelled in order.

use crate::knot_pipeline::PDCode;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Port {
    NW,
    NE,
    SW,
    SE,
}

use Port::*;

impl Port {
    fn opposite(self) -> Port {
        match self {
            NW => SE,
            SE => NW,
            NE => SW,
            SW => NE,
        }
    }
}

/// Counterclockwise order of the ports.
const CCW: [Port; 4] = [NE, NW, SW, SE];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Over {
    /// The NW–SE strand is over.
    Nwse,
    /// The NE–SW strand is over.
    Nesw,
}

type End = (usize, Port);

#[derive(Default)]
struct Builder {
    crossings: Vec<Over>,
    links: std::collections::BTreeMap<End, End>,
}

impl Builder {
    fn crossing(&mut self, over: Over) -> usize {
        self.crossings.push(over);
        self.crossings.len() - 1
    }

    fn connect(&mut self, a: End, b: End) {
        assert!(!self.links.contains_key(&a) && !self.links.contains_key(&b));
        self.links.insert(a, b);
        self.links.insert(b, a);
    }

    fn pd(&self) -> Result<PDCode> {
        let n = self.crossings.len();
        if n == 0 {
            return Ok(PDCode { crossings: vec![] });
        }
        let mut label = std::collections::BTreeMap::new();
        let mut incoming = std::collections::BTreeSet::new();
        let first: End = (0, SE);
        let mut cur = first;
        let mut e = 1u32;
        loop {
            let nxt = self.links[&cur];
            label.insert(cur, e);
            label.insert(nxt, e);
            incoming.insert(nxt);
            e += 1;
            cur = (nxt.0, nxt.1.opposite());
            if cur == first {
                break;
            }
        }
        if label.len() != 4 * n {
            return Err(Error::Parse("not a knot".into()));
        }
        let mut crossings = Vec::with_capacity(n);
        for (c, over) in self.crossings.iter().enumerate() {
            let under = match over {
                Over::Nwse => [NE, SW],
                Over::Nesw => [NW, SE],
            };
            let inp = *under.iter().find(|p| incoming.contains(&(c, **p))).unwrap();
            let k = CCW.iter().position(|p| *p == inp).unwrap();
            let mut t = [0u32; 4];
            for (i, slot) in t.iter_mut().enumerate() {
                *slot = label[&(c, CCW[(k + i) % 4])];
            }
            crossings.push(t);
        }
        Ok(PDCode { crossings })
    }
}

/// Closure of a braid word on `strands` strands; `i > 0` is `σ_i`, `i < 0`
/// its inverse. Fails with "not a knot" if the closure has several
/// components.
pub fn braid_closure(strands: usize, word: &[i32]) -> Result<PDCode> {
    if word.is_empty() {
        return if strands == 1 {
            Ok(PDCode { crossings: vec![] })
        } else {
            Err(Error::Parse("not a knot".into()))
        };
    }
    let mut b = Builder::default();
    enum Slot {
        Top(usize),
        Port(End),
    }
    let mut cur: Vec<Slot> = (0..strands).map(Slot::Top).collect();
    let mut tops: Vec<Option<End>> = vec![None; strands];
    for &g in word {
        let i = g.unsigned_abs() as usize - 1;
        if i + 1 >= strands {
            return Err(Error::Parse(format!("generator {g} out of range")));
        }
        let c = b.crossing(if g > 0 { Over::Nwse } else { Over::Nesw });
        for (pos, port) in [(i, NW), (i + 1, NE)] {
            match cur[pos] {
                Slot::Top(s) => tops[s] = Some((c, port)),
                Slot::Port(end) => b.connect(end, (c, port)),
            }
        }
        cur[i] = Slot::Port((c, SW));
        cur[i + 1] = Slot::Port((c, SE));
    }
    for (pos, slot) in cur.into_iter().enumerate() {
        let top = tops[pos].ok_or_else(|| Error::Parse("strand without crossings".into()))?;
        match slot {
            Slot::Port(end) => b.connect(end, top),
            Slot::Top(_) => unreachable!(),
        }
    }
    b.pd()
}

/// Pretzel knot `P(p_1, …, p_k)`: column `i` has `|p_i|` crossings twisted
/// by the sign of `p_i`, columns joined cyclically at top and bottom.
pub fn pretzel(ps: &[i32]) -> Result<PDCode> {
    if ps.len() < 2 || ps.contains(&0) {
        return Err(Error::Parse("pretzel needs at least two nonzero entries".into()));
    }
    let mut b = Builder::default();
    let mut cols = Vec::new();
    for &p in ps {
        let n = p.unsigned_abs() as usize;
        let over = if p > 0 { Over::Nwse } else { Over::Nesw };
        let cs: Vec<usize> = (0..n).map(|_| b.crossing(over)).collect();
        for k in 0..n - 1 {
            b.connect((cs[k], SW), (cs[k + 1], NW));
            b.connect((cs[k], SE), (cs[k + 1], NE));
        }
        cols.push(cs);
    }
    let m = cols.len();
    for c in 0..m {
        let d = (c + 1) % m;
        b.connect((cols[c][0], NE), (cols[d][0], NW));
        b.connect((*cols[c].last().unwrap(), SE), (*cols[d].last().unwrap(), SW));
    }
    b.pd()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_closure() {
        let pd = braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!(pd.crossings, vec![[3, 6, 4, 1], [1, 4, 2, 5], [5, 2, 6, 3]]);
    }

    #[test]
    fn two_component_closure_rejected() {
        assert!(braid_closure(2, &[1, 1]).is_err());
    }

    #[test]
    fn pretzel_code() {
        let pd = pretzel(&[3, 3, -3]).unwrap();
        assert_eq!(pd.crossings.len(), 9);
        assert_eq!(pd.crossings[0], [11, 1, 12, 18]);
    }
}
