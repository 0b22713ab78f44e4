//! Proof trees as `bussproofs` source.

use std::fmt::Write as _;

use crate::kernel::{ProofTree, Rule, Sequent};

/// Larger proofs are refused: they do not typeset usefully.
pub const DEFAULT_NODE_CAP: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("proof has {nodes} nodes, above the LaTeX cap of {cap}")]
pub struct TooLarge {
    pub nodes: usize,
    pub cap: usize,
}

/// Escapes a rendered sequent for math mode.
pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len() * 2);
    for c in text.chars() {
        match c {
            '⊢' => out.push_str(" \\vdash "),
            '¬' => out.push_str("\\neg "),
            '∧' => out.push_str("\\wedge^"),
            '∨' => out.push_str("\\vee^"),
            '⊤' => out.push_str("\\top^"),
            '⊥' => out.push_str("\\bot^"),
            '−' => out.push('-'),
            '≥' => out.push_str("\\geq "),
            '_' => out.push_str("\\_"),
            '{' => out.push_str("\\{"),
            '}' => out.push_str("\\}"),
            '#' | '$' | '%' | '&' => {
                out.push('\\');
                out.push(c);
            }
            ';' => out.push_str(";\\ "),
            _ => out.push(c),
        }
    }
    out
}

fn label(rule: Rule) -> &'static str {
    match rule {
        Rule::AndPos => "$\\wedge^+$",
        Rule::OrPos1 => "$\\vee^+_1$",
        Rule::OrPos2 => "$\\vee^+_2$",
        Rule::TruePos => "$\\top^+$",
        Rule::Init1 => "Init$_1$",
        Rule::Release => "Release",
        Rule::AndNeg => "$\\wedge^-$",
        Rule::OrNeg => "$\\vee^-$",
        Rule::FalseNeg => "$\\bot^-$",
        Rule::TrueNeg => "$\\top^-$",
        Rule::Store => "Store",
        Rule::Select => "Select",
        Rule::Init2 => "Init$_2$",
        Rule::Pol => "Pol",
        Rule::Cut => "cut",
        Rule::MemoHit => "memo",
    }
}

fn sequent(s: &Sequent) -> String {
    format!("${}$", escape(&s.to_string()))
}

/// Renders `proof` inside a `prooftree` environment.
pub fn render(proof: &ProofTree, cap: usize) -> Result<String, TooLarge> {
    if proof.size() > cap {
        return Err(TooLarge { nodes: proof.size(), cap });
    }
    let mut out = String::from("\\begin{prooftree}\n");
    // post-order: premises are emitted before their conclusion
    let mut stack: Vec<(&ProofTree, bool)> = vec![(proof, false)];
    while let Some((node, expanded)) = stack.pop() {
        if !expanded {
            stack.push((node, true));
            stack.extend(node.premises.iter().rev().map(|p| (p, false)));
            continue;
        }
        let inference = match node.premises.len() {
            0 => {
                out.push_str("\\AxiomC{}\n");
                "UnaryInfC"
            }
            1 => "UnaryInfC",
            2 => "BinaryInfC",
            _ => "TrinaryInfC",
        };
        let _ = writeln!(out, "\\RightLabel{{\\scriptsize {}}}", label(node.rule));
        let _ = writeln!(out, "\\{inference}{{{}}}", sequent(&node.conclusion));
    }
    out.push_str("\\end{prooftree}\n");
    Ok(out)
}
