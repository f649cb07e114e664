//! Figure recipes. A preset is a command plus default flags; flags given on
//! the command line override it, and any explicit `--sweep` replaces the
//! preset's sweeps.

use crate::error::CliError;

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub command: &'static str,
    pub about: &'static str,
    pub flags: &'static [&'static str],
    pub sweeps: &'static [&'static str],
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1a",
        command: "polaritons",
        about: "polariton frequencies against g at resonance: TRK, D = 0 and rotating-wave",
        flags: &["--resonance", "--d-rule", "trk,zero,rwa"],
        sweeps: &["g 0 3 301"],
    },
    Preset {
        name: "fig1b",
        command: "levels",
        about: "energy ladder against g, TRK",
        flags: &["--resonance", "--d-rule", "trk", "--max-level", "8"],
        sweeps: &["g 0 3 301"],
    },
    Preset {
        name: "fig1c",
        command: "levels",
        about: "energy ladder against g, D = 0, up to the spectral collapse",
        flags: &["--resonance", "--d-rule", "zero", "--max-level", "8"],
        sweeps: &["g 0 0.5 251"],
    },
    Preset {
        name: "fig1d",
        command: "levels",
        about: "energy ladder against g, rotating-wave",
        flags: &["--resonance", "--d-rule", "rwa", "--max-level", "8"],
        sweeps: &["g 0 3 301"],
    },
    Preset {
        name: "fig2a",
        command: "spectrum",
        about: "field spectrum against omega_b, |1,0>, g = 0.1",
        flags: &["--g", "0.1", "--state", "10", "--overlay", "trk,zero"],
        sweeps: &["omega_b 0.2 3 141"],
    },
    Preset {
        name: "fig2b",
        command: "spectrum",
        about: "field spectrum against omega_b, |1,0>, g = 0.35",
        flags: &["--g", "0.35", "--state", "10", "--overlay", "trk,scaled(0.5),zero"],
        sweeps: &["omega_b 0.2 3 141"],
    },
    Preset {
        name: "fig2c",
        command: "spectrum",
        about: "field spectrum against omega_b, |0,1>, g = 0.1",
        flags: &["--g", "0.1", "--state", "01", "--overlay", "trk,zero"],
        sweeps: &["omega_b 0.2 3 141"],
    },
    Preset {
        name: "fig2d",
        command: "spectrum",
        about: "field spectrum against omega_b, |0,1>, g = 0.35",
        flags: &["--g", "0.35", "--state", "01", "--overlay", "trk,zero,rwa"],
        sweeps: &["omega_b 0.2 3 141"],
    },
    Preset {
        name: "fig3a",
        command: "vrs",
        about: "vacuum Rabi splitting against g at resonance, TRK",
        flags: &["--resonance", "--d-rule", "trk"],
        sweeps: &["g 0 1.2 121"],
    },
    Preset {
        name: "fig3b",
        command: "vrs",
        about: "doublets at g = 0.1, 0.35, 1 (TRK) with the rotating-wave doublet",
        flags: &["--resonance", "--d-rule", "trk,rwa"],
        sweeps: &["g 0.1,0.35,1"],
    },
    Preset {
        name: "fig4a",
        command: "thermometry",
        about: "QFI over coupling and temperature, TRK at resonance",
        flags: &["--resonance", "--d-rule", "trk"],
        sweeps: &["g 0 1.5 151", "temperature 0.02 2 100 log"],
    },
    Preset {
        name: "fig4b",
        command: "thermometry",
        about: "signal-to-noise ratio of the D = 0 probe through the critical point",
        flags: &["--resonance", "--continuation"],
        sweeps: &["temperature 0.05,0.1", "g 0 1.5 3001"],
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

const COMMANDS: [&str; 6] = ["polaritons", "levels", "spectrum", "vrs", "thermometry", "validate"];

/// Splices a `--preset NAME` into the argument list: the preset's command
/// is inserted if none is given and its flags go in front of the user's.
pub fn expand(args: Vec<String>) -> Result<Vec<String>, CliError> {
    let Some(pos) = args.iter().position(|a| a == "--preset" || a.starts_with("--preset=")) else {
        return Ok(args);
    };
    let name = match args[pos].strip_prefix("--preset=") {
        Some(n) => n.to_string(),
        None => args.get(pos + 1).cloned().ok_or_else(|| CliError::Config("--preset needs a name".into()))?,
    };
    let preset = find(&name).ok_or_else(|| {
        let known: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
        CliError::Config(format!("unknown preset `{name}` (known: {})", known.join(", ")))
    })?;
    let (bin, rest) = args.split_first().ok_or_else(|| CliError::Config("empty argument list".into()))?;
    let mut rest = rest.to_vec();
    let cmd = match rest.iter().position(|a| COMMANDS.contains(&a.as_str())) {
        Some(i) => {
            let c = rest.remove(i);
            if c != preset.command {
                return Err(CliError::Config(format!("preset {name} belongs to `{}`, not `{c}`", preset.command)));
            }
            c
        }
        None => preset.command.to_string(),
    };
    let mut out = vec![bin.clone(), cmd];
    out.extend(preset.flags.iter().map(|s| s.to_string()));
    if !rest.iter().any(|a| a == "--sweep") {
        for s in preset.sweeps {
            out.push("--sweep".into());
            out.extend(s.split_whitespace().map(String::from));
        }
    }
    out.extend(rest);
    Ok(out)
}
