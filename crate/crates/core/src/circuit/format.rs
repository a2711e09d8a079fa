//! Text format for circuits.
//!
//! ```text
//! pc <num_nodes> <num_vars>
//! l <var> <w_true> <w_false>        Bernoulli leaf
//! i <var> <sign>                    indicator leaf, sign 1 = true branch
//! c <value>                         constant
//! p <k> <c1> ... <ck>               product
//! s <k> <w1> <c1> ... <wk> <ck>     sum
//! ```
//!
//! Node ids are 0-based line positions; `#` lines and blank lines are skipped.

use std::fmt::Write;

use super::{Circuit, Node};
use crate::error::{Error, Result};

pub fn parse_pc(text: &str) -> Result<Circuit> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty circuit file"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 || h[0] != "pc" {
        return Err(Error::parse(hline, format!("malformed header `{header}`")));
    }
    let num_nodes: usize = parse_num(hline, h[1])?;
    let num_vars: u32 = parse_num(hline, h[2])?;

    let mut nodes = Vec::with_capacity(num_nodes);
    let mut last_line = hline;
    for (line_no, line) in lines {
        last_line = line_no;
        let id = nodes.len();
        if id == num_nodes {
            return Err(Error::parse(
                line_no,
                format!("more than {num_nodes} node lines"),
            ));
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let node = parse_node(line_no, id, num_vars, &toks)?;
        nodes.push(node);
    }
    if nodes.len() != num_nodes {
        return Err(Error::parse(
            last_line,
            format!("header declares {num_nodes} nodes, found {}", nodes.len()),
        ));
    }
    Circuit::new(num_vars, nodes)
}

fn parse_node(line: usize, id: usize, num_vars: u32, toks: &[&str]) -> Result<Node> {
    let arity = |n: usize| {
        if toks.len() != n {
            Err(Error::parse(
                line,
                format!("expected {} fields, found {}", n, toks.len()),
            ))
        } else {
            Ok(())
        }
    };
    let var = |s: &str| -> Result<u32> {
        let v: u32 = parse_num(line, s)?;
        if v >= num_vars {
            return Err(Error::parse(
                line,
                format!("variable {v} out of range for {num_vars} variables"),
            ));
        }
        Ok(v)
    };
    let weight = |s: &str| -> Result<f64> {
        let w: f64 = parse_num(line, s)?;
        if !(w.is_finite() && w >= 0.0) {
            return Err(Error::parse(
                line,
                format!("weight `{s}` must be a nonnegative number"),
            ));
        }
        Ok(w)
    };
    let child = |s: &str| -> Result<usize> {
        let c: usize = parse_num(line, s)?;
        if c >= id {
            return Err(Error::parse(
                line,
                format!("node {id} references child {c}, which is not an earlier node"),
            ));
        }
        Ok(c)
    };

    match toks[0] {
        "l" => {
            arity(4)?;
            Ok(Node::Bernoulli {
                var: var(toks[1])?,
                w_true: weight(toks[2])?,
                w_false: weight(toks[3])?,
            })
        }
        "i" => {
            arity(3)?;
            let positive = match toks[2] {
                "1" => true,
                "0" => false,
                s => {
                    return Err(Error::parse(
                        line,
                        format!("indicator sign must be 0 or 1, got `{s}`"),
                    ))
                }
            };
            Ok(Node::Indicator {
                var: var(toks[1])?,
                positive,
            })
        }
        "c" => {
            arity(2)?;
            Ok(Node::Constant(weight(toks[1])?))
        }
        "p" => {
            let k: usize = parse_num(line, toks.get(1).copied().unwrap_or(""))?;
            arity(2 + k)?;
            Ok(Node::Product(
                toks[2..].iter().map(|t| child(t)).collect::<Result<_>>()?,
            ))
        }
        "s" => {
            let k: usize = parse_num(line, toks.get(1).copied().unwrap_or(""))?;
            arity(2 + 2 * k)?;
            let ch = toks[2..]
                .chunks(2)
                .map(|p| Ok((weight(p[0])?, child(p[1])?)))
                .collect::<Result<_>>()?;
            Ok(Node::Sum(ch))
        }
        t => Err(Error::parse(line, format!("unknown node tag `{t}`"))),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::parse(line, format!("bad number `{s}`")))
}

pub fn write_pc(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "pc {} {}", c.num_nodes(), c.num_vars()).unwrap();
    for node in c.nodes() {
        match node {
            Node::Bernoulli {
                var,
                w_true,
                w_false,
            } => writeln!(out, "l {var} {w_true} {w_false}"),
            Node::Indicator { var, positive } => writeln!(out, "i {var} {}", *positive as u8),
            Node::Constant(v) => writeln!(out, "c {v}"),
            Node::Product(ch) => {
                write!(out, "p {}", ch.len()).unwrap();
                for c in ch {
                    write!(out, " {c}").unwrap();
                }
                writeln!(out)
            }
            Node::Sum(ch) => {
                write!(out, "s {}", ch.len()).unwrap();
                for (w, c) in ch {
                    write!(out, " {w} {c}").unwrap();
                }
                writeln!(out)
            }
        }
        .unwrap();
    }
    out
}
