//! Protocol references: builtin names or JSON file paths.

use std::path::Path;

use bellbound_core::protocol::{
    make_biased_strategy, make_local_deterministic, make_local_shared_bit, make_one_bit_pr,
    random_protocol_b_independent, random_protocol_general, BitMap, Flavor, Protocol,
    RandomSizes,
};

use crate::error::{CliError, CliResult};

/// Builtins exercised by the Monte Carlo consistency check.
pub const SHIPPED_BUILTINS: [&str; 8] = [
    "local:const0,const0",
    "local:id,const0",
    "local-shared:9,6",
    "pr-onebit",
    "biased:0.8:one",
    "biased:0.8:zero",
    "biased:0.5:one",
    "random-b-indep:42",
];

/// Parses a builtin name. `None` means the name is not builtin syntax.
pub fn builtin(name: &str) -> Option<CliResult<Protocol>> {
    let bad = |reason: String| CliError::Usage(format!("bad builtin `{name}`: {reason}"));
    if name == "pr-onebit" {
        return Some(Ok(make_one_bit_pr()));
    }
    let (kind, rest) = name.split_once(':')?;
    let result = match kind {
        "local" => rest
            .split_once(',')
            .ok_or_else(|| bad("expected local:<fA>,<fB>".into()))
            .and_then(|(fa, fb)| {
                let fa: BitMap = fa.parse().map_err(|e| bad(format!("{e}")))?;
                let fb: BitMap = fb.parse().map_err(|e| bad(format!("{e}")))?;
                Ok(make_local_deterministic(fa, fb))
            }),
        "local-shared" => rest
            .split_once(',')
            .ok_or_else(|| bad("expected local-shared:<hex>,<hex>".into()))
            .and_then(|(a, b)| {
                let table = |s: &str| {
                    u8::from_str_radix(s, 16)
                        .ok()
                        .filter(|&t| t < 16)
                        .ok_or_else(|| bad(format!("`{s}` is not a hex digit")))
                };
                Ok(make_local_shared_bit(table(a)?, table(b)?))
            }),
        "biased" => rest
            .split_once(':')
            .ok_or_else(|| bad("expected biased:<p>:<flavor>".into()))
            .and_then(|(p, flavor)| {
                let p: f64 = p.parse().map_err(|_| bad(format!("`{p}` is not a number")))?;
                let flavor: Flavor = flavor.parse().map_err(|e| bad(format!("{e}")))?;
                make_biased_strategy(p, flavor).map_err(|e| bad(format!("{e}")))
            }),
        "random-b-indep" | "random" => rest
            .parse::<u64>()
            .map_err(|_| bad(format!("`{rest}` is not a seed")))
            .and_then(|seed| {
                let sizes = RandomSizes::from_seed(seed);
                let built = if kind == "random" {
                    random_protocol_general(seed, sizes)
                } else {
                    random_protocol_b_independent(seed, sizes)
                };
                built.map_err(|e| bad(format!("{e}")))
            }),
        _ => return None,
    };
    Some(result)
}

/// Builtin names take precedence; anything else must be a readable file.
pub fn resolve(reference: &str) -> CliResult<Protocol> {
    if let Some(p) = builtin(reference) {
        return p;
    }
    let path = Path::new(reference);
    if path.is_file() {
        crate::protocol_file::load_protocol(path)
    } else {
        Err(CliError::UnknownProtocol(reference.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        for name in SHIPPED_BUILTINS {
            assert!(resolve(name).is_ok(), "{name}");
        }
        assert_eq!(resolve("local:id,const0").unwrap().label, "local:id,const0");
        assert!(matches!(resolve("local:id"), Err(CliError::Usage(_))));
        assert!(matches!(resolve("biased:1.5:one"), Err(CliError::Usage(_))));
        assert!(matches!(resolve("biased:0.5:two"), Err(CliError::Usage(_))));
        assert!(matches!(resolve("no-such-protocol"), Err(CliError::UnknownProtocol(_))));
        assert_eq!(resolve("random:5").unwrap().seed, Some(5));
    }
}
