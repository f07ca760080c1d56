//! Operator-aware term output for `write/1`, `Display` and the REPL.

use crate::ops::{self, Assoc, PrefixAssoc};
use crate::term::Term;

/// Renders `term`. With `quoted` set, atoms that would not read back as the
/// same atom are wrapped in single quotes.
pub fn format_term(term: &Term, quoted: bool) -> String {
    let mut out = String::new();
    write_term(&mut out, term, 1200, quoted);
    out
}

fn is_symbol_char(c: char) -> bool {
    "+-*/\\^<>=~:.?@#&$".contains(c)
}

fn needs_quotes(name: &str) -> bool {
    let mut chars = name.chars();
    let Some(first) = chars.next() else {
        return true;
    };
    if matches!(name, "[]" | "!" | ";" | "{}") {
        return false;
    }
    if first.is_ascii_lowercase() {
        return !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
    }
    !name.chars().all(is_symbol_char)
}

fn write_atom(out: &mut String, name: &str, quoted: bool) {
    if quoted && needs_quotes(name) {
        out.push('\'');
        for c in name.chars() {
            match c {
                '\'' => out.push_str("\\'"),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                c => out.push(c),
            }
        }
        out.push('\'');
    } else {
        out.push_str(name);
    }
}

fn push_operand(out: &mut String, rendered: &str) {
    // keep `a- -1` and `a- (-b)` from fusing into one symbol token
    if let (Some(last), Some(first)) = (out.chars().last(), rendered.chars().next()) {
        if is_symbol_char(last) && is_symbol_char(first) {
            out.push(' ');
        }
    }
    out.push_str(rendered);
}

fn write_term(out: &mut String, term: &Term, max_prec: u32, quoted: bool) {
    match term {
        Term::Int(i) => out.push_str(&i.to_string()),
        Term::Var(v) => out.push_str(&format!("_G{}", v.0)),
        Term::Atom(a) => write_atom(out, a.as_str(), quoted),
        Term::Compound(c) => {
            let name = c.functor.as_str();
            if name == "." && c.args.len() == 2 {
                write_list(out, term, quoted);
                return;
            }
            if c.args.len() == 2 {
                if let Some((p, assoc)) = ops::infix(name) {
                    let (lp, rp) = match assoc {
                        Assoc::Xfx => (p - 1, p - 1),
                        Assoc::Xfy => (p - 1, p),
                        Assoc::Yfx => (p, p - 1),
                    };
                    let open = p > max_prec;
                    if open {
                        out.push('(');
                    }
                    write_term(out, &c.args[0], lp, quoted);
                    let alpha = name.chars().next().is_some_and(|ch| ch.is_alphabetic());
                    if name == "," {
                        out.push_str(", ");
                    } else if alpha || matches!(name, ":-" | "->" | ";") {
                        out.push(' ');
                        write_atom(out, name, quoted);
                        out.push(' ');
                    } else {
                        write_atom(out, name, quoted);
                    }
                    let mut rhs = String::new();
                    write_term(&mut rhs, &c.args[1], rp, quoted);
                    push_operand(out, &rhs);
                    if open {
                        out.push(')');
                    }
                    return;
                }
            }
            if c.args.len() == 1 {
                if let Some((p, assoc)) = ops::prefix(name) {
                    let ap = match assoc {
                        PrefixAssoc::Fy => p,
                        PrefixAssoc::Fx => p - 1,
                    };
                    let open = p > max_prec;
                    if open {
                        out.push('(');
                    }
                    write_atom(out, name, quoted);
                    let mut rhs = String::new();
                    write_term(&mut rhs, &c.args[0], ap, quoted);
                    let alpha = name.chars().next().is_some_and(|ch| ch.is_alphabetic());
                    let numeric = matches!(c.args[0], Term::Int(_));
                    if alpha || numeric || rhs.starts_with('(') {
                        out.push(' ');
                    }
                    push_operand(out, &rhs);
                    if open {
                        out.push(')');
                    }
                    return;
                }
            }
            write_atom(out, name, quoted);
            out.push('(');
            for (i, arg) in c.args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_term(out, arg, 999, quoted);
            }
            out.push(')');
        }
    }
}

fn write_list(out: &mut String, term: &Term, quoted: bool) {
    out.push('[');
    let mut cur = term;
    let mut first = true;
    loop {
        match cur {
            Term::Compound(c) if c.functor.as_str() == "." && c.args.len() == 2 => {
                if !first {
                    out.push(',');
                }
                first = false;
                write_term(out, &c.args[0], 999, quoted);
                cur = &c.args[1];
            }
            Term::Atom(a) if a.as_str() == "[]" => break,
            tail => {
                out.push('|');
                write_term(out, tail, 999, quoted);
                break;
            }
        }
    }
    out.push(']');
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_term;

    fn round(src: &str) -> String {
        format_term(&parse_term(src).unwrap().term, true)
    }

    #[test]
    fn operators_and_lists() {
        assert_eq!(round("X is 2+3*4"), "_G0 is 2+3*4");
        assert_eq!(round("(2+3)*4"), "(2+3)*4");
        assert_eq!(round("[1,2|T]"), "[1,2|_G0]");
        assert_eq!(round("'hello world'"), "'hello world'");
        assert_eq!(round("a - -1"), "a- -1");
        assert_eq!(round("(a :- b, c)"), "a :- b, c");
        assert_eq!(round("\\+ p(x)"), "\\+p(x)");
        assert_eq!(round("f(',', a)"), "f(',',a)");
    }

    #[test]
    fn written_terms_read_back() {
        for src in [
            "f(a, [1, 2], g(X, -3))",
            "(a ; b -> c)",
            "1 - (2 - 3)",
            "1 - 2 - 3",
            "- (1)",
            "-(-(1))",
            "x mod 3 // 2",
            "'A'(b)",
            "f((a, b))",
        ] {
            let t = parse_term(src).unwrap().term;
            let text = format_term(&t, true);
            let back = parse_term(&text).unwrap().term;
            assert_eq!(t, back, "{src} rendered as {text}");
        }
    }
}
