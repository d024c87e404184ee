//! Energy dissipation between lobe energies and the ε-relaxed proximity
//! verdict on the difference.

use serde::{Deserialize, Serialize};

use super::{EnergyError, EnvelopeLobe, Polarity, Result};

/// Identifies one lobe energy: frame, lobe id, polarity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LobeRef {
    pub frame_id: String,
    pub lobe_id: String,
    pub polarity: Polarity,
}

impl LobeRef {
    fn of(lobe: &EnvelopeLobe) -> Self {
        Self {
            frame_id: lobe.frame_id.clone(),
            lobe_id: lobe.id.clone(),
            polarity: lobe.polarity,
        }
    }

    /// Segment label such as `+L4`.
    pub fn segment_label(&self) -> String {
        format!("{}{}", self.polarity.sign(), self.lobe_id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DissipationKind {
    WithinFrame,
    BetweenFrames,
}

/// An |E − E′| measurement between two lobe energies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DissipationRecord {
    pub kind: DissipationKind,
    pub first: LobeRef,
    pub second: LobeRef,
    pub energy_first: f64,
    pub energy_second: f64,
    pub dissipation: f64,
}

/// Dissipation between the +ve and −ve lobes of one frame.
pub fn dissipation_within_frame(
    plus: &EnvelopeLobe,
    minus: &EnvelopeLobe,
) -> Result<DissipationRecord> {
    if plus.frame_id != minus.frame_id {
        return Err(EnergyError::FrameMismatch(format!(
            "within-frame dissipation needs one frame, got `{}` and `{}`",
            plus.frame_id, minus.frame_id
        )));
    }
    if plus.polarity != Polarity::Positive || minus.polarity != Polarity::Negative {
        return Err(EnergyError::LobeIdMismatch(format!(
            "expected a +ve and a -ve lobe, got {} and {}",
            plus.polarity.label(),
            minus.polarity.label()
        )));
    }
    Ok(DissipationRecord {
        kind: DissipationKind::WithinFrame,
        first: LobeRef::of(plus),
        second: LobeRef::of(minus),
        energy_first: plus.area,
        energy_second: minus.area,
        dissipation: (plus.area - minus.area).abs(),
    })
}

/// Dissipation of the same lobe location across two frames.
pub fn dissipation_between_frames(
    at_t: &EnvelopeLobe,
    at_t2: &EnvelopeLobe,
) -> Result<DissipationRecord> {
    if at_t.id != at_t2.id || at_t.polarity != at_t2.polarity {
        return Err(EnergyError::LobeIdMismatch(format!(
            "between-frame dissipation compares one location, got {}{} and {}{}",
            at_t.polarity.sign(),
            at_t.id,
            at_t2.polarity.sign(),
            at_t2.id
        )));
    }
    if at_t.frame_id == at_t2.frame_id {
        return Err(EnergyError::FrameMismatch(format!(
            "between-frame dissipation needs two frames, both lobes are in `{}`",
            at_t.frame_id
        )));
    }
    Ok(DissipationRecord {
        kind: DissipationKind::BetweenFrames,
        first: LobeRef::of(at_t),
        second: LobeRef::of(at_t2),
        energy_first: at_t.area,
        energy_second: at_t2.area,
        dissipation: (at_t.area - at_t2.area).abs(),
    })
}

/// ε-relaxed proximity of two quantities: near iff |a − b| < ε, strict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProximityVerdict {
    pub pair: (String, String),
    pub epsilon: f64,
    pub difference: f64,
    pub near: bool,
}

pub fn relaxed_near(a: f64, b: f64, epsilon: f64) -> ProximityVerdict {
    relaxed_near_refs((a.to_string(), b.to_string()), a, b, epsilon)
}

/// [`relaxed_near`] with caller-supplied labels for the compared pair.
pub fn relaxed_near_refs(pair: (String, String), a: f64, b: f64, epsilon: f64) -> ProximityVerdict {
    let difference = (a - b).abs();
    ProximityVerdict {
        pair,
        epsilon,
        difference,
        near: difference < epsilon,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lobe(frame: &str, id: &str, polarity: Polarity, area: f64) -> EnvelopeLobe {
        EnvelopeLobe {
            id: id.into(),
            polarity,
            support: None,
            area,
            frame_id: frame.into(),
        }
    }

    #[test]
    fn within_frame_dissipation_matches_hand_arithmetic() {
        // frame 19, lobe L2: |38.952 - 36.2096| = 2.7424
        let plus = lobe("19", "L2", Polarity::Positive, 38.952);
        let minus = lobe("19", "L2", Polarity::Negative, 36.2096);
        let rec = dissipation_within_frame(&plus, &minus).unwrap();
        assert_eq!(format!("{:.4}", rec.dissipation), "2.7424");

        // frame 19, lobe L6: |33.1404 - 33.3126| = 0.1722
        let plus = lobe("19", "L6", Polarity::Positive, 33.1404);
        let minus = lobe("19", "L6", Polarity::Negative, 33.3126);
        let rec = dissipation_within_frame(&plus, &minus).unwrap();
        assert_eq!(format!("{:.4}", rec.dissipation), "0.1722");
    }

    #[test]
    fn equal_areas_dissipate_nothing() {
        let plus = lobe("1", "L1", Polarity::Positive, 5.0);
        let minus = lobe("1", "L1", Polarity::Negative, 5.0);
        assert_eq!(
            dissipation_within_frame(&plus, &minus).unwrap().dissipation,
            0.0
        );
    }

    #[test]
    fn within_frame_rejects_mixed_frames() {
        let plus = lobe("1", "L1", Polarity::Positive, 5.0);
        let minus = lobe("2", "L1", Polarity::Negative, 5.0);
        assert!(matches!(
            dissipation_within_frame(&plus, &minus),
            Err(EnergyError::FrameMismatch(_))
        ));
    }

    #[test]
    fn between_frames_matches_hand_arithmetic() {
        // +ve L4, frames 24 -> 26: |34.5799 - 34.3714| = 0.2085
        let a = lobe("24", "L4", Polarity::Positive, 34.5799);
        let b = lobe("26", "L4", Polarity::Positive, 34.3714);
        let rec = dissipation_between_frames(&a, &b).unwrap();
        assert_eq!(format!("{:.4}", rec.dissipation), "0.2085");

        // -ve L6, frames 24 -> 26: |33.3491 - 33.424| = 0.0749
        let a = lobe("24", "L6", Polarity::Negative, 33.3491);
        let b = lobe("26", "L6", Polarity::Negative, 33.424);
        let rec = dissipation_between_frames(&a, &b).unwrap();
        assert_eq!(format!("{:.4}", rec.dissipation), "0.0749");
    }

    #[test]
    fn between_frames_rejects_mismatched_lobes_and_same_frame() {
        let a = lobe("24", "L4", Polarity::Positive, 1.0);
        let b = lobe("26", "L6", Polarity::Positive, 1.0);
        assert!(matches!(
            dissipation_between_frames(&a, &b),
            Err(EnergyError::LobeIdMismatch(_))
        ));
        let b = lobe("24", "L4", Polarity::Positive, 1.0);
        assert!(matches!(
            dissipation_between_frames(&a, &b),
            Err(EnergyError::FrameMismatch(_))
        ));
    }

    #[test]
    fn identical_lobes_between_frames_dissipate_nothing() {
        let a = lobe("24", "L4", Polarity::Positive, 3.25);
        let b = lobe("26", "L4", Polarity::Positive, 3.25);
        assert_eq!(dissipation_between_frames(&a, &b).unwrap().dissipation, 0.0);
    }

    #[test]
    fn relaxed_near_is_strict() {
        // +ve L6 frames 24, 26: |32.8082 - 32.8635| = 0.0553 < 0.2
        assert!(relaxed_near(32.8082, 32.8635, 0.2).near);
        // -ve L4: 0.0638 < 0.2
        assert!(relaxed_near(35.0868, 35.023, 0.2).near);
        // equality of inputs is near for any positive epsilon
        assert!(relaxed_near(1.5, 1.5, 1e-12).near);
        // the boundary itself is not near (0.25 is exactly representable)
        let v = relaxed_near(1.0, 1.25, 0.25);
        assert_eq!(v.difference, 0.25);
        assert!(!v.near);
    }
}
