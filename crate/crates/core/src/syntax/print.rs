use super::{Coalition, Formula};

// Binding strength, loosest first.
const IMPLIES: u8 = 1;
const UNTIL: u8 = 2;
const UNARY: u8 = 3;

/// Prints the core constructors in the text grammar; `parse` reads the
/// result back to the same AST.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write(f, IMPLIES, &mut out);
    out
}

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => IMPLIES,
        Formula::Until(..) => UNTIL,
        _ => UNARY,
    }
}

fn coalition(c: Coalition, out: &mut String) {
    out.push_str("<<");
    for (i, a) in c.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&a.to_string());
    }
    out.push_str(">>");
}

fn write(f: &Formula, min: u8, out: &mut String) {
    if prec(f) < min {
        out.push('(');
        write(f, IMPLIES, out);
        out.push(')');
        return;
    }
    match f {
        Formula::Var(i) => {
            out.push('p');
            out.push_str(&i.to_string());
        }
        Formula::Falsum => out.push_str("false"),
        Formula::Implies(a, b) => {
            write(a, UNTIL, out);
            out.push_str(" -> ");
            write(b, IMPLIES, out);
        }
        Formula::Until(a, b) => {
            write(a, UNARY, out);
            out.push_str(" U ");
            write(b, UNTIL, out);
        }
        Formula::ForAllPaths(a) => {
            out.push_str("A ");
            write(a, UNARY, out);
        }
        Formula::Coalition(c, a) => {
            coalition(*c, out);
            out.push(' ');
            write(a, UNARY, out);
        }
        Formula::Next(a) => {
            out.push_str("X ");
            write(a, UNARY, out);
        }
        Formula::Always(a) => {
            out.push_str("G ");
            write(a, UNARY, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(print(&Formula::Falsum), "false");
        assert_eq!(
            print(&Formula::coalition(
                Coalition::EMPTY,
                Formula::always(Formula::var(1))
            )),
            "<<>> G p1"
        );
        assert_eq!(
            print(&Formula::implies(Formula::var(1), Formula::Falsum)),
            "p1 -> false"
        );
        let nested = Formula::implies(
            Formula::implies(Formula::var(1), Formula::var(2)),
            Formula::for_all(Formula::until(
                Formula::until(Formula::var(1), Formula::var(2)),
                Formula::var(3),
            )),
        );
        assert_eq!(print(&nested), "(p1 -> p2) -> A ((p1 U p2) U p3)");
    }
}
