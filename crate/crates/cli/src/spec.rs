//! Algebra specifiers: `si:n`, `chain:m`, `free:n,k`, `dist:s` or a path to
//! a JSON file.

use palg::algebra::{build_chain, build_si, AlgebraJson, TableAlgebra};
use palg::free::free_distributive;
use palg::{build_free, Error, Limits, Rank};

fn number(s: &str, spec: &str) -> Result<usize, Error> {
    s.trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("bad number `{s}` in algebra `{spec}`")))
}

pub fn load(spec: &str, limits: &Limits) -> Result<TableAlgebra, Error> {
    if let Some(n) = spec.strip_prefix("si:") {
        return build_si(number(n, spec)?, limits);
    }
    if let Some(m) = spec.strip_prefix("chain:") {
        return build_chain(number(m, spec)?, limits);
    }
    if let Some(rest) = spec.strip_prefix("free:") {
        let (n, k) = rest
            .split_once(',')
            .ok_or_else(|| Error::Invalid(format!("expected free:n,k, got `{spec}`")))?;
        let n: Rank = n.trim().parse()?;
        return Ok(build_free(n, number(k, spec)?, limits)?.to_table(limits)?.0);
    }
    if let Some(s) = spec.strip_prefix("dist:") {
        return Ok(free_distributive(number(s, spec)?, limits)?.to_table(limits)?.0);
    }
    let text = std::fs::read_to_string(spec).map_err(|e| {
        Error::Invalid(format!(
            "`{spec}` is neither an algebra specifier nor a readable file: {e}"
        ))
    })?;
    let json: AlgebraJson = serde_json::from_str(&text).map_err(|e| Error::Invalid(format!("{spec}: {e}")))?;
    json.into_algebra()?.to_table(limits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        let l = Limits::default();
        assert_eq!(load("si:2", &l).unwrap().size(), 5);
        assert_eq!(load("chain:4", &l).unwrap().size(), 4);
        assert_eq!(load("free:2,1", &l).unwrap().size(), 7);
        assert_eq!(load("free:omega,1", &l).unwrap().size(), 7);
        assert_eq!(load("dist:2", &l).unwrap().size(), 6);
        assert!(matches!(load("si:x", &l), Err(Error::Invalid(_))));
        assert!(matches!(load("free:2", &l), Err(Error::Invalid(_))));
        assert!(matches!(load("/nonexistent.json", &l), Err(Error::Invalid(_))));
    }
}
