//! The fixed operator table. Operator (re)definition is not supported.

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Assoc {
    Xfx,
    Xfy,
    Yfx,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum PrefixAssoc {
    Fy,
    Fx,
}

pub fn infix(name: &str) -> Option<(u32, Assoc)> {
    Some(match name {
        ":-" => (1200, Assoc::Xfx),
        ";" | "|" => (1100, Assoc::Xfy),
        "->" => (1050, Assoc::Xfy),
        "," => (1000, Assoc::Xfy),
        "=" | "\\=" | "==" | "\\==" | "is" | "<" | ">" | "=<" | ">=" | "=:=" | "=\\=" | "@<"
        | "@>" | "@=<" | "@>=" => (700, Assoc::Xfx),
        "+" | "-" => (500, Assoc::Yfx),
        "*" | "//" | "mod" => (400, Assoc::Yfx),
        _ => return None,
    })
}

pub fn prefix(name: &str) -> Option<(u32, PrefixAssoc)> {
    Some(match name {
        ":-" => (1200, PrefixAssoc::Fx),
        "\\+" => (900, PrefixAssoc::Fy),
        "-" => (200, PrefixAssoc::Fy),
        _ => return None,
    })
}

pub fn is_op(name: &str) -> bool {
    infix(name).is_some() || prefix(name).is_some()
}
