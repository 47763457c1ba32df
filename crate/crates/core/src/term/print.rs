use std::fmt;

use super::Term;

fn prec(t: &Term) -> u8 {
    match t {
        Term::Join(..) => 1,
        Term::Meet(..) => 2,
        Term::Star(_) => 3,
        _ => 4,
    }
}

struct Style {
    meet: &'static str,
    join: &'static str,
}

const ASCII: Style = Style {
    meet: " & ",
    join: " | ",
};
const UNICODE: Style = Style {
    meet: " ∧ ",
    join: " ∨ ",
};

fn write(t: &Term, s: &Style, out: &mut dyn fmt::Write) -> fmt::Result {
    match t {
        Term::Zero => out.write_char('0'),
        Term::One => out.write_char('1'),
        Term::Var(i) => write!(out, "x{i}"),
        Term::Meet(a, b) | Term::Join(a, b) => {
            let (p, op) = if matches!(t, Term::Meet(..)) {
                (2, s.meet)
            } else {
                (1, s.join)
            };
            child(a, p, s, out)?;
            out.write_str(op)?;
            // a right operand of the same precedence keeps its parentheses
            child(b, p + 1, s, out)
        }
        Term::Star(a) => {
            child(a, 3, s, out)?;
            out.write_char('*')
        }
    }
}

fn child(c: &Term, min: u8, s: &Style, out: &mut dyn fmt::Write) -> fmt::Result {
    if prec(c) < min {
        out.write_char('(')?;
        write(c, s, out)?;
        out.write_char(')')
    } else {
        write(c, s, out)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write(self, &ASCII, f)
    }
}

/// Renders with `∧` and `∨`.
pub fn pretty(t: &Term) -> String {
    let mut s = String::new();
    write(t, &UNICODE, &mut s).expect("writing to a String");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{join, meet, parse, star, var};

    #[test]
    fn minimal_parentheses() {
        let t = meet(var(1), star(meet(var(1), var(2))));
        assert_eq!(t.to_string(), "x1 & (x1 & x2)*");
        assert_eq!(star(star(var(1))).to_string(), "x1**");
        assert_eq!(meet(var(1), meet(var(2), var(3))).to_string(), "x1 & (x2 & x3)");
        assert_eq!(meet(meet(var(1), var(2)), var(3)).to_string(), "x1 & x2 & x3");
        assert_eq!(join(var(1), meet(var(2), var(3))).to_string(), "x1 | x2 & x3");
        assert_eq!(meet(join(var(1), var(2)), var(3)).to_string(), "(x1 | x2) & x3");
        assert_eq!(pretty(&parse("(x1 | x2)* & x3").unwrap()), "(x1 ∨ x2)* ∧ x3");
    }

    #[test]
    fn reparses() {
        for s in ["x1 & (x2 | x3)*", "(x1 | x2) | (x3 | x1)", "0*** | 1 & x4", "((x1))"] {
            let t = parse(s).unwrap();
            assert_eq!(parse(&t.to_string()).unwrap(), t);
        }
    }
}
