//! Canonical text form of a [`Tiling`]: a JSON object with the fields
//! `box`, `bricks`, `rotation_policy` and `placements`, written with one
//! placement per line.

use std::fmt::Write;

use serde::Serialize;

use super::Tiling;
use crate::error::{Error, Result};

pub fn encode(t: &Tiling) -> String {
    let mut out = String::with_capacity(64 + 48 * t.placements.len());
    out.push_str("{\n");
    let _ = writeln!(out, "  \"box\": {},", compact(&t.box_shape));
    let _ = writeln!(out, "  \"bricks\": {},", compact(&t.bricks));
    let _ = writeln!(
        out,
        "  \"rotation_policy\": {},",
        compact(&t.rotation_policy)
    );
    if t.placements.is_empty() {
        out.push_str("  \"placements\": []\n");
    } else {
        out.push_str("  \"placements\": [\n");
        for (i, p) in t.placements.iter().enumerate() {
            let sep = if i + 1 == t.placements.len() { "" } else { "," };
            let _ = writeln!(out, "    {}{sep}", compact(p));
        }
        out.push_str("  ]\n");
    }
    out.push_str("}\n");
    out
}

pub fn decode(text: &str) -> Result<Tiling> {
    serde_json::from_str(text).map_err(|e| {
        let suffix = format!(" at line {} column {}", e.line(), e.column());
        let message = e.to_string();
        Error::Parse {
            line: e.line(),
            column: e.column(),
            message: message
                .strip_suffix(&suffix)
                .unwrap_or(&message)
                .to_string(),
        }
    })
}

fn compact<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("tiling fields always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{grid_fill, BoxShape, Brick, RotationPolicy};
    use proptest::prelude::*;

    fn sample() -> Tiling {
        grid_fill(
            &BoxShape::new(vec![4, 6]).unwrap(),
            &Brick::new(vec![2, 3]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn layout() {
        let text = encode(&sample());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "  \"box\": [4,6],");
        assert_eq!(lines[2], "  \"bricks\": [[2,3]],");
        assert_eq!(lines[3], "  \"rotation_policy\": \"fixed\",");
        assert_eq!(
            lines[5],
            "    {\"brick\":0,\"orientation\":[0,1],\"origin\":[0,0]},"
        );
        assert_eq!(lines.len(), 4 + 1 + 4 + 2);
    }

    #[test]
    fn empty_placements() {
        let t = Tiling::new(
            BoxShape::new(vec![1, 1]).unwrap(),
            vec![],
            RotationPolicy::AxisPermutations,
        );
        let text = encode(&t);
        assert!(text.contains("\"placements\": []"));
        assert_eq!(decode(&text).unwrap(), t);
    }

    #[test]
    fn truncated_document() {
        let text = encode(&sample());
        let cut = &text[..text.len() / 2];
        match decode(cut) {
            Err(Error::Parse { line, .. }) => assert!(line >= 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_field_is_named() {
        let text = encode(&sample()).replacen("\"bricks\"", "\"tiles\"", 1);
        match decode(&text) {
            Err(Error::Parse { message, line, .. }) => {
                assert!(message.contains("tiles"), "{message}");
                assert_eq!(line, 3);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = encode(&sample()).replacen("\"origin\"", "\"corner\"", 1);
        assert!(
            matches!(decode(&text), Err(Error::Parse { message, .. }) if message.contains("corner"))
        );
    }

    #[test]
    fn zero_side_is_rejected() {
        let text = encode(&sample()).replacen("[4,6]", "[0,6]", 1);
        assert!(matches!(decode(&text), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn roundtrip(
            sides in prop::collection::vec(1u64..50, 1..4),
            bricks in prop::collection::vec(prop::collection::vec(1u64..9, 3), 0..4),
            raw in prop::collection::vec((0usize..5, any::<bool>(), prop::collection::vec(0u64..100, 3)), 0..20),
            rotations in any::<bool>(),
        ) {
            let dim = sides.len();
            let policy = if rotations { RotationPolicy::AxisPermutations } else { RotationPolicy::Fixed };
            let mut t = Tiling::new(
                BoxShape::new(sides).unwrap(),
                bricks.into_iter().map(|b| Brick::new(b[..dim].to_vec()).unwrap()).collect(),
                policy,
            );
            for (brick, flip, origin) in raw {
                let mut orientation: crate::model::Orientation = (0..dim as u8).collect();
                if flip {
                    orientation.reverse();
                }
                t.placements.push(crate::model::Placement::new(brick, orientation, origin[..dim].iter().copied().collect()));
            }
            prop_assert_eq!(decode(&encode(&t)).unwrap(), t);
        }
    }
}
