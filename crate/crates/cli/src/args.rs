use crnx::engine::DomStrategy;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbsorbingArg {
    Terminal,
    Enumerate(usize),
    /// Comma-separated complexes, resolved once the network is loaded.
    Set(String),
}

fn cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("`{s}` is not a positive count")),
        Ok(n) => Ok(n),
    }
}

pub fn parse_dom(s: &str) -> Result<DomStrategy, String> {
    match s.split_once(':') {
        None if s == "maximal" => Ok(DomStrategy::Maximal),
        Some(("all", n)) => Ok(DomStrategy::AllSubsets(cap(n)?)),
        _ => Err(format!("expected `maximal` or `all:N`, got `{s}`")),
    }
}

pub fn parse_absorbing(s: &str) -> Result<AbsorbingArg, String> {
    match s.split_once(':') {
        None if s == "terminal" => Ok(AbsorbingArg::Terminal),
        Some(("enumerate", n)) => Ok(AbsorbingArg::Enumerate(cap(n)?)),
        Some(("set", list)) => Ok(AbsorbingArg::Set(list.trim_matches('"').to_string())),
        _ => Err(format!("expected `terminal`, `enumerate:N` or `set:c1,c2`, got `{s}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies() {
        assert_eq!(parse_dom("maximal"), Ok(DomStrategy::Maximal));
        assert_eq!(parse_dom("all:8"), Ok(DomStrategy::AllSubsets(8)));
        assert!(parse_dom("all:0").is_err());
        assert!(parse_dom("some").is_err());
        assert_eq!(parse_absorbing("enumerate:3"), Ok(AbsorbingArg::Enumerate(3)));
        assert_eq!(
            parse_absorbing("set:\"X2 + X3,2X3\""),
            Ok(AbsorbingArg::Set("X2 + X3,2X3".into()))
        );
        assert!(parse_absorbing("terminal:2").is_err());
    }
}
