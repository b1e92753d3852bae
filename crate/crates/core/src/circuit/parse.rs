//! Line-based circuit description format.
//!
//! ```text
//! # comment
//! element <id> source|beamsplitter|mirror|detector:<label>|blocker|phaseshifter:<radians>
//! link <id>:<port> <id>:<port> [phase=<radians>]
//! ```

use std::fmt::Write;

use super::{Circuit, CircuitBuilder, CircuitError, ElementKind, PortRef};
use crate::angle::parse_radians;

#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    /// 1-based character column.
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                tokens.push(Token {
                    text: &line[b..byte],
                    column: c + 1,
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &line[b..],
            column: c + 1,
        });
    }
    tokens
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn valid_id(id: &str) -> bool {
    !id.is_empty() && !id.contains([':', '#', '='])
}

fn parse_id(token: Token<'_>, line: usize) -> Result<String, CircuitError> {
    if valid_id(token.text) {
        Ok(token.text.to_string())
    } else {
        Err(syntax(
            line,
            token.column,
            format!("invalid element id `{}`", token.text),
        ))
    }
}

fn parse_port(token: Token<'_>, line: usize) -> Result<PortRef, CircuitError> {
    let Some((id, port)) = token.text.rsplit_once(':') else {
        return Err(syntax(
            line,
            token.column,
            format!("expected `<id>:<port>`, found `{}`", token.text),
        ));
    };
    if !valid_id(id) {
        return Err(syntax(line, token.column, format!("invalid element id `{id}`")));
    }
    let port: u8 = port.parse().map_err(|_| {
        syntax(
            line,
            token.column + id.chars().count() + 1,
            format!("invalid port number `{port}`"),
        )
    })?;
    Ok(PortRef::new(id, port))
}

fn parse_angle(text: &str, column: usize, line: usize) -> Result<f64, CircuitError> {
    parse_radians(text).map_err(|e| syntax(line, column + e.column - 1, e.message))
}

fn parse_kind(token: Token<'_>, line: usize) -> Result<ElementKind, CircuitError> {
    let (head, arg) = match token.text.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (token.text, None),
    };
    let arg_column = token.column + head.chars().count() + 1;
    let need_arg = |what: &str| -> Result<&str, CircuitError> {
        match arg {
            Some(a) if !a.is_empty() => Ok(a),
            _ => Err(syntax(line, arg_column, format!("`{head}` requires `:{what}`"))),
        }
    };
    let no_arg = |kind: ElementKind| -> Result<ElementKind, CircuitError> {
        match arg {
            None => Ok(kind),
            Some(_) => Err(syntax(line, arg_column, format!("`{head}` takes no argument"))),
        }
    };
    match head {
        "source" => no_arg(ElementKind::Source),
        "beamsplitter" => no_arg(ElementKind::Beamsplitter),
        "mirror" => no_arg(ElementKind::Mirror),
        "blocker" => no_arg(ElementKind::Blocker),
        "detector" => Ok(ElementKind::detector(need_arg("<label>")?)),
        "phaseshifter" => {
            let shift = parse_angle(need_arg("<radians>")?, arg_column, line)?;
            Ok(ElementKind::phase_shifter(shift))
        }
        _ => Err(CircuitError::UnknownKind {
            line,
            kind: token.text.to_string(),
        }),
    }
}

/// Parses a circuit description. Accepts LF or CRLF line endings.
pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut builder = CircuitBuilder::new();
    for (index, raw) in text.split('\n').enumerate() {
        let line = index + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let content = raw.split_once('#').map_or(raw, |(before, _)| before);
        let tokens = tokenize(content);
        let Some(&keyword) = tokens.first() else {
            continue;
        };
        match keyword.text {
            "element" => {
                if tokens.len() != 3 {
                    let column = tokens.get(3).map_or(keyword.column, |t| t.column);
                    return Err(syntax(line, column, "expected `element <id> <kind>`"));
                }
                let id = parse_id(tokens[1], line)?;
                let kind = parse_kind(tokens[2], line)?;
                builder = builder.element_at(id, kind, Some(line));
            }
            "link" => {
                if !(3..=4).contains(&tokens.len()) {
                    let column = tokens.get(4).map_or(keyword.column, |t| t.column);
                    return Err(syntax(
                        line,
                        column,
                        "expected `link <id>:<port> <id>:<port> [phase=<radians>]`",
                    ));
                }
                let from = parse_port(tokens[1], line)?;
                let to = parse_port(tokens[2], line)?;
                let phase = match tokens.get(3) {
                    None => 0.0,
                    Some(t) => match t.text.strip_prefix("phase=") {
                        Some(value) => parse_angle(value, t.column + "phase=".len(), line)?,
                        None => {
                            return Err(syntax(
                                line,
                                t.column,
                                format!("expected `phase=<radians>`, found `{}`", t.text),
                            ))
                        }
                    },
                };
                builder = builder.link_at(from, to, phase, Some(line));
            }
            other => {
                return Err(syntax(
                    line,
                    keyword.column,
                    format!("expected `element` or `link`, found `{other}`"),
                ));
            }
        }
    }
    builder.build()
}

fn radians(value: f64) -> String {
    let magnitude = value.abs();
    if magnitude != 0.0 && !(1e-4..1e16).contains(&magnitude) {
        format!("{value:e}")
    } else {
        format!("{value}")
    }
}

/// Renders a circuit back into the description format. The output parses to
/// an identical circuit.
pub fn render_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    for (id, kind) in circuit.elements() {
        let kind = match kind {
            ElementKind::Detector { label } => format!("detector:{label}"),
            ElementKind::PhaseShifter { shift } => format!("phaseshifter:{}", radians(*shift)),
            other => other.keyword().to_string(),
        };
        writeln!(out, "element {id} {kind}").unwrap();
    }
    for link in circuit.links() {
        write!(out, "link {} {}", link.from, link.to).unwrap();
        if link.phase != 0.0 {
            write!(out, " phase={}", radians(link.phase)).unwrap();
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MZ: &str = "\
# Mach-Zehnder
element S source
element BS1 beamsplitter
element Ma mirror
element Mb mirror
element PSa phaseshifter:pi/3
element BS2 beamsplitter
element U detector:u
element D detector:d
link S:0 BS1:0
link BS1:0 Ma:0
link Ma:0 PSa:0
link PSa:0 BS2:0 phase=0.25
link BS1:1 Mb:0
link Mb:0 BS2:1 phase=0.25   # same length
link BS2:1 U:0
link BS2:0 D:0
";

    #[test]
    fn parses_mach_zehnder() {
        let c = parse_circuit(MZ).unwrap();
        assert_eq!(c.elements().len(), 8);
        assert_eq!(c.links().len(), 8);
        assert_eq!(c.link_from("Mb", 0).unwrap().phase, 0.25);
        assert_eq!(
            c.element("PSa"),
            Some(&ElementKind::PhaseShifter {
                shift: std::f64::consts::PI / 3.0
            })
        );
    }

    #[test]
    fn crlf_and_lf_agree() {
        let crlf = MZ.replace('\n', "\r\n");
        assert_eq!(parse_circuit(MZ).unwrap(), parse_circuit(&crlf).unwrap());
    }

    #[test]
    fn deterministic() {
        assert_eq!(parse_circuit(MZ).unwrap(), parse_circuit(MZ).unwrap());
    }

    #[test]
    fn render_reparses_identically() {
        let c = parse_circuit(MZ).unwrap();
        assert_eq!(parse_circuit(&render_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn dangling_link() {
        let text = format!("{MZ}link BS1:0 BS9:0\n");
        assert!(matches!(
            parse_circuit(&text),
            Err(CircuitError::DanglingLink { line: Some(18), ref id }) if id == "BS9"
        ));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_circuit("element S source\nlink S:x BS:0\n").unwrap_err();
        assert_eq!(
            err,
            CircuitError::Syntax {
                line: 2,
                column: 8,
                message: "invalid port number `x`".into()
            }
        );
        let err = parse_circuit("element P phaseshifter:banana\n").unwrap_err();
        assert!(
            matches!(
                err,
                CircuitError::Syntax {
                    line: 1,
                    column: 24,
                    ..
                }
            ),
            "{err:?}"
        );
        let err = parse_circuit("  frobnicate\n").unwrap_err();
        assert!(matches!(err, CircuitError::Syntax { line: 1, column: 3, .. }));
        let err = parse_circuit("link A:0 B:0 length=3\n").unwrap_err();
        assert!(matches!(
            err,
            CircuitError::Syntax {
                line: 1,
                column: 14,
                ..
            }
        ));
    }

    #[test]
    fn unknown_kind_and_duplicates() {
        assert!(matches!(
            parse_circuit("element X laser\n"),
            Err(CircuitError::UnknownKind { line: 1, .. })
        ));
        let dup = format!("{MZ}element U mirror\n");
        assert!(matches!(
            parse_circuit(&dup),
            Err(CircuitError::DuplicateId { line: Some(18), .. })
        ));
        assert!(matches!(parse_circuit("# nothing here\n"), Err(CircuitError::NoSource)));
    }

    #[test]
    fn arity_and_cycles() {
        let text = "element S source\nelement M mirror\nelement U detector:u\nlink S:0 M:0\nlink M:1 U:0\n";
        assert!(matches!(
            parse_circuit(text),
            Err(CircuitError::PortArity { line: Some(5), .. })
        ));
        let text = "element S source\nelement B beamsplitter\nelement M mirror\nelement U detector:u\n\
                    link S:0 B:0\nlink B:0 M:0\nlink M:0 B:1\nlink B:1 U:0\n";
        assert!(matches!(parse_circuit(text), Err(CircuitError::Cycle(_))));
    }
}
