//! Newick serialization with a canonical form: children are emitted in order
//! of their smallest descendant leaf label, so equal trees produce identical
//! bytes.

use crate::error::{Error, Result};
use crate::tree::{NodeId, Phylogeny, PhylogenyBuilder};

pub fn write_newick(tree: &Phylogeny) -> String {
    let min_below = tree.min_label_below();
    let mut out = String::new();
    emit(tree, tree.root(), &min_below, &mut out);
    out.push(';');
    out
}

fn emit(tree: &Phylogeny, v: NodeId, min_below: &[usize], out: &mut String) {
    if let Some(label) = tree.node(v).leaf_label {
        out.push_str(&label.to_string());
    } else {
        let mut kids: Vec<NodeId> = tree.children(v).to_vec();
        kids.sort_by_key(|&c| min_below[c]);
        out.push('(');
        for (i, c) in kids.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            emit(tree, *c, min_below, out);
            out.push(':');
            out.push_str(&format!("{}", tree.branch_length(*c)));
        }
        out.push(')');
    }
}

pub fn parse_newick(text: &str) -> Result<Phylogeny> {
    let mut p = Parser { bytes: text.trim().as_bytes(), pos: 0, builder: PhylogenyBuilder::new() };
    let root = p.subtree()?;
    p.expect(b';')?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(Error::Parse(format!("trailing input after ';' at byte {}", p.pos)));
    }
    p.builder.finish(root)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    builder: PhylogenyBuilder,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected '{}' at byte {}, found {:?}",
                b as char,
                self.pos,
                self.peek().map(|c| c as char)
            )))
        }
    }

    fn subtree(&mut self) -> Result<NodeId> {
        self.skip_ws();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let (left, left_len) = self.child()?;
                self.expect(b',')?;
                let (right, right_len) = self.child()?;
                self.skip_ws();
                if self.peek() == Some(b',') {
                    return Err(Error::Parse(format!(
                        "multifurcation at byte {}; phylogenies are binary",
                        self.pos
                    )));
                }
                self.expect(b')')?;
                Ok(self.builder.internal(left, right, left_len, right_len))
            }
            Some(b) if b.is_ascii_digit() => {
                let label = self.integer()?;
                Ok(self.builder.leaf(label))
            }
            other => Err(Error::Parse(format!(
                "expected '(' or a leaf label at byte {}, found {:?}",
                self.pos,
                other.map(|c| c as char)
            ))),
        }
    }

    fn child(&mut self) -> Result<(NodeId, f64)> {
        let node = self.subtree()?;
        self.expect(b':')?;
        let len = self.number()?;
        if !len.is_finite() || len < 0.0 {
            return Err(Error::Parse(format!("branch length {len} must be finite and >= 0")));
        }
        Ok((node, len))
    }

    fn integer(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected an integer leaf label at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::Parse(format!("bad leaf label: {e}")))
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit() || matches!(b, b'.' | b'e' | b'E' | b'+' | b'-')) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse(format!("expected a number at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::Parse(format!("bad branch length: {e}")))
    }
}
