//! Annotation streams: CSV with the header `t_ms,valence,arousal` and one event
//! per line. The annotation front end writes the same schema.

use std::fs;
use std::path::Path;

use affectfuse_core::dataset::{AnnotationEvent, AnnotationStream};

use super::FormatError;

pub const ANNOTATION_HEADER: &str = "t_ms,valence,arousal";

pub fn parse_annotations(text: &str, origin: &Path) -> Result<AnnotationStream, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == ANNOTATION_HEADER => {}
        _ => {
            return Err(FormatError::parse(
                origin,
                format!("first line must be `{ANNOTATION_HEADER}`"),
            ))
        }
    }
    let mut events = Vec::new();
    for (n, line) in lines {
        let bad = || FormatError::parse(origin, format!("line {}: `{line}`", n + 1));
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [t, v, a] = fields[..] else {
            return Err(bad());
        };
        let t_ms = t.parse::<u64>().map_err(|_| bad())?;
        let valence = v.parse::<f64>().map_err(|_| bad())?;
        let arousal = a.parse::<f64>().map_err(|_| bad())?;
        events.push(AnnotationEvent {
            t_ms,
            valence,
            arousal,
        });
    }
    AnnotationStream::new(events).map_err(|source| FormatError::Dataset {
        path: origin.into(),
        source,
    })
}

pub fn load_annotations(path: &Path) -> Result<AnnotationStream, FormatError> {
    let text = fs::read_to_string(path).map_err(|e| FormatError::io(path, e))?;
    parse_annotations(&text, path)
}

/// Values are written in shortest round-trip form, so a reload is exact.
pub fn write_annotations(path: &Path, stream: &AnnotationStream) -> Result<(), FormatError> {
    let mut out = String::from(ANNOTATION_HEADER);
    out.push('\n');
    for e in stream.events() {
        out.push_str(&format!("{},{},{}\n", e.t_ms, e.valence, e.arousal));
    }
    fs::write(path, out).map_err(|e| FormatError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_cases() {
        let s = parse_annotations("t_ms,valence,arousal\n0,0.5,0.5\n2000,-0.5,0\n", Path::new("a"))
            .unwrap();
        assert_eq!(s.events().len(), 2);
        assert_eq!(s.hold_at_ms(1000).unwrap(), (0.5, 0.5));
        let bad_header = parse_annotations("t,v,a\n0,0,0\n", Path::new("a"));
        assert!(matches!(bad_header, Err(FormatError::Parse { .. })));
        let short_row = parse_annotations("t_ms,valence,arousal\n0,0.1\n", Path::new("a"));
        assert!(matches!(short_row, Err(FormatError::Parse { .. })));
        let out_of_range = parse_annotations("t_ms,valence,arousal\n0,1.5,0\n", Path::new("a"));
        assert!(matches!(out_of_range, Err(FormatError::Dataset { .. })));
        let backwards = parse_annotations("t_ms,valence,arousal\n5,0,0\n5,0,0\n", Path::new("a"));
        assert!(matches!(backwards, Err(FormatError::Dataset { .. })));
    }
}
