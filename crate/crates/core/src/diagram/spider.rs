use serde::Serialize;

use super::{par, par_all, seq, seq_all, Diagram, DiagramError, Term, TypeVector};

/// A boundary port. Inputs sort before outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Port {
    In(usize),
    Out(usize),
}

/// Canonical form of a δ/ρ/⊤/swap diagram: the partition of its boundary
/// ports into connected components. Blocks and their members are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SpiderNF {
    pub m: usize,
    pub n: usize,
    pub dom: TypeVector,
    pub cod: TypeVector,
    pub blocks: Vec<Vec<Port>>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn fresh(&mut self) -> usize {
        self.0.push(self.0.len());
        self.0.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Push the wires `inputs` through `d`, returning its output wires.
fn wire(d: &Diagram, inputs: &[usize], uf: &mut UnionFind) -> Result<Vec<usize>, DiagramError> {
    Ok(match d.term() {
        Term::Id(_) => inputs.to_vec(),
        Term::Copy(_) => vec![inputs[0], inputs[0]],
        Term::Delete(_) => vec![],
        Term::Compare(_) => {
            uf.union(inputs[0], inputs[1]);
            vec![inputs[0]]
        }
        Term::Swap(..) => vec![inputs[1], inputs[0]],
        Term::Seq(a, b) => {
            let mid = wire(a, inputs, uf)?;
            wire(b, &mid, uf)?
        }
        Term::Par(a, b) => {
            let (l, r) = inputs.split_at(a.dom().len());
            let mut out = wire(a, l, uf)?;
            out.extend(wire(b, r, uf)?);
            out
        }
        Term::Gen { name, .. } => return Err(DiagramError::UnsupportedFragment(name.clone())),
    })
}

pub fn spider_normalize(d: &Diagram) -> Result<SpiderNF, DiagramError> {
    let mut uf = UnionFind(Vec::new());
    let inputs: Vec<usize> = (0..d.dom().len()).map(|_| uf.fresh()).collect();
    let outputs = wire(d, &inputs, &mut uf)?;
    let mut ports: Vec<(usize, Port)> = Vec::new();
    for (i, &w) in inputs.iter().enumerate() {
        ports.push((uf.find(w), Port::In(i)));
    }
    for (j, &w) in outputs.iter().enumerate() {
        ports.push((uf.find(w), Port::Out(j)));
    }
    let mut blocks: Vec<Vec<Port>> = Vec::new();
    let mut root_of_block: Vec<usize> = Vec::new();
    for (root, port) in ports {
        match root_of_block.iter().position(|&r| r == root) {
            Some(b) => blocks[b].push(port),
            None => {
                root_of_block.push(root);
                blocks.push(vec![port]);
            }
        }
    }
    for b in &mut blocks {
        b.sort();
    }
    blocks.sort();
    Ok(SpiderNF {
        m: d.dom().len(),
        n: d.cod().len(),
        dom: d.dom().to_vec(),
        cod: d.cod().to_vec(),
        blocks,
    })
}

/// Permutation diagram sending input position `order[j]` to output `j`,
/// built from adjacent swaps.
fn permutation(types: &[String], order: &[usize]) -> Result<Diagram, DiagramError> {
    let mut current: Vec<usize> = (0..types.len()).collect();
    let mut layers = vec![Diagram::id(types.to_vec())];
    // Bubble sort `current` into `order`, emitting one layer per swap.
    let rank: Vec<usize> = {
        let mut r = vec![0; order.len()];
        for (j, &i) in order.iter().enumerate() {
            r[i] = j;
        }
        r
    };
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 0..current.len().saturating_sub(1) {
            if rank[current[k]] > rank[current[k + 1]] {
                let now: Vec<String> = current.iter().map(|&i| types[i].clone()).collect();
                let layer = par_all(&[
                    Diagram::id(now[..k].to_vec()),
                    Diagram::swap(&now[k], &now[k + 1]),
                    Diagram::id(now[k + 2..].to_vec()),
                ]);
                layers.push(layer);
                current.swap(k, k + 1);
                swapped = true;
            }
        }
    }
    seq_all(&layers)
}

/// `ρ` chain merging `k ≥ 1` wires, then `δ` chain fanning out to `l` wires.
fn spider(base: &str, k: usize, l: usize) -> Result<Diagram, DiagramError> {
    let mut merge = Diagram::id(vec![base.to_string(); k]);
    for width in (2..=k).rev() {
        let step = par(
            &Diagram::compare(base),
            &Diagram::id(vec![base.to_string(); width - 2]),
        );
        merge = seq(&merge, &step)?;
    }
    let fan = if l == 0 {
        Diagram::delete(base)
    } else {
        let mut fan = Diagram::id1(base);
        for width in 1..l {
            let step = par(
                &Diagram::copy(base),
                &Diagram::id(vec![base.to_string(); width - 1]),
            );
            fan = seq(&fan, &step)?;
        }
        fan
    };
    seq(&merge, &fan)
}

/// Canonical `ρ ; δ` diagram of a spider form: gather each block's inputs,
/// merge and fan them out, then route outputs into place.
pub fn spider_rebuild(nf: &SpiderNF) -> Result<Diagram, DiagramError> {
    let bad = |msg: &str| DiagramError::BadSpider(msg.to_string());
    if nf.dom.len() != nf.m || nf.cod.len() != nf.n {
        return Err(bad("arity and type vectors disagree"));
    }
    let mut seen_in = vec![false; nf.m];
    let mut seen_out = vec![false; nf.n];
    let mut in_order: Vec<usize> = Vec::new();
    let mut out_order: Vec<usize> = Vec::new();
    let mut middles = Vec::new();
    for block in &nf.blocks {
        let ins: Vec<usize> = block
            .iter()
            .filter_map(|p| if let Port::In(i) = p { Some(*i) } else { None })
            .collect();
        let outs: Vec<usize> = block
            .iter()
            .filter_map(|p| if let Port::Out(j) = p { Some(*j) } else { None })
            .collect();
        let Some(&first) = ins.first().filter(|&&i| i < nf.m) else {
            return Err(bad("block without a valid input port"));
        };
        let base = &nf.dom[first];
        for &i in &ins {
            if i >= nf.m || std::mem::replace(&mut seen_in[i], true) || &nf.dom[i] != base {
                return Err(bad("input ports repeat, overflow or mix types"));
            }
        }
        for &j in &outs {
            if j >= nf.n || std::mem::replace(&mut seen_out[j], true) || &nf.cod[j] != base {
                return Err(bad("output ports repeat, overflow or mix types"));
            }
        }
        in_order.extend(&ins);
        out_order.extend(&outs);
        middles.push(spider(base, ins.len(), outs.len())?);
    }
    if seen_in.contains(&false) || seen_out.contains(&false) {
        return Err(bad("blocks do not cover every port"));
    }
    let gather = permutation(&nf.dom, &in_order)?;
    let mid = par_all(&middles);
    let mid_types: Vec<String> = out_order.iter().map(|&j| nf.cod[j].clone()).collect();
    // Output position out_order[k] receives wire k.
    let mut scatter_order = vec![0; nf.n];
    for (k, &j) in out_order.iter().enumerate() {
        scatter_order[j] = k;
    }
    let scatter = permutation(&mid_types, &scatter_order)?;
    seq_all(&[gather, mid, scatter])
}
