//! Reversible circuits built from Fredkin gates.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fredkin {
    pub control: usize,
    pub targets: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitDesign {
    pub num_wires: usize,
    pub gates: Vec<Fredkin>,
    pub wire_names: Vec<String>,
}

impl CircuitDesign {
    pub fn new(num_wires: usize) -> Self {
        CircuitDesign { num_wires, gates: Vec::new(), wire_names: (0..num_wires).map(|i| format!("w{i}")).collect() }
    }

    pub fn fredkin(&mut self, control: usize, t1: usize, t2: usize) -> Result<&mut Self> {
        let g = Fredkin { control, targets: [t1, t2] };
        self.check(&g)?;
        self.gates.push(g);
        Ok(self)
    }

    fn check(&self, g: &Fredkin) -> Result<()> {
        let [t1, t2] = g.targets;
        if g.control >= self.num_wires || t1 >= self.num_wires || t2 >= self.num_wires {
            return Err(Error::InvalidArgument(format!("gate {g:?} uses a wire beyond {}", self.num_wires)));
        }
        if g.control == t1 || g.control == t2 || t1 == t2 {
            return Err(Error::InvalidArgument(format!("gate {g:?} repeats a wire")));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.wire_names.len() != self.num_wires {
            return Err(Error::InvalidArgument("wire name count differs from wire count".into()));
        }
        self.gates.iter().try_for_each(|g| self.check(g))
    }

    /// Direct evaluation; wire `i` is bit `i` of `input`.
    pub fn evaluate(&self, input: u64) -> u64 {
        let mut x = input;
        for g in &self.gates {
            if x >> g.control & 1 == 1 {
                let [a, b] = g.targets;
                let (va, vb) = (x >> a & 1, x >> b & 1);
                if va != vb {
                    x ^= (1 << a) | (1 << b);
                }
            }
        }
        x
    }

    fn wire(&self, tok: &str, line: usize) -> Result<usize> {
        if let Some(i) = self.wire_names.iter().position(|n| n == tok) {
            return Ok(i);
        }
        tok.parse::<usize>()
            .ok()
            .filter(|&i| i < self.num_wires)
            .ok_or_else(|| Error::Parse { line, msg: format!("unknown wire `{tok}`") })
    }

    /// Parses a netlist.
    ///
    /// ```text
    /// wires 4 a b k z      # count, then optional names
    /// fredkin a k z        # swap k,z when a=1
    /// and a b z            # z=0 before; z=a&b after (fredkin b a z)
    /// or a b k             # k=1 before; b=a|b after (fredkin a k b)
    /// not a k z            # k=1,z=0 before; k=!a, z=a after (fredkin a k z)
    /// copy a z k           # z=0,k=1 before; z=a, k=!a after (fredkin a k z)
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut circuit: Option<CircuitDesign> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let toks: Vec<&str> = body.split_whitespace().collect();
            let perr = |msg: String| Error::Parse { line, msg };
            if toks[0] == "wires" {
                if circuit.is_some() {
                    return Err(perr("repeated `wires` header".into()));
                }
                let n: usize = toks
                    .get(1)
                    .and_then(|t| t.parse().ok())
                    .filter(|&n| n > 0 && n <= 64)
                    .ok_or_else(|| perr("`wires` needs a count in 1..=64".into()))?;
                let mut c = CircuitDesign::new(n);
                if toks.len() > 2 {
                    if toks.len() - 2 != n {
                        return Err(perr(format!("{} names for {n} wires", toks.len() - 2)));
                    }
                    c.wire_names = toks[2..].iter().map(|s| s.to_string()).collect();
                }
                circuit = Some(c);
                continue;
            }
            let c = circuit.as_mut().ok_or_else(|| perr("gate before `wires` header".into()))?;
            if toks.len() != 4 {
                return Err(perr(format!("`{}` takes three wires", toks[0])));
            }
            let w = [c.wire(toks[1], line)?, c.wire(toks[2], line)?, c.wire(toks[3], line)?];
            let [a, b, z] = w;
            let g = match toks[0] {
                "fredkin" => (a, b, z),
                "and" => (b, a, z),
                "or" => (a, z, b),
                "not" => (a, b, z),
                "copy" => (a, z, b),
                other => return Err(perr(format!("unknown gate `{other}`"))),
            };
            c.fredkin(g.0, g.1, g.2).map_err(|e| perr(e.to_string()))?;
        }
        circuit.ok_or(Error::Parse { line: 0, msg: "missing `wires` header".into() })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("wires {} {}\n", self.num_wires, self.wire_names.join(" "));
        for g in &self.gates {
            s += &format!(
                "fredkin {} {} {}\n",
                self.wire_names[g.control], self.wire_names[g.targets[0]], self.wire_names[g.targets[1]]
            );
        }
        s
    }
}
