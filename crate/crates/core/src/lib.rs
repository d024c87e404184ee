//! Descriptive proximity analytics: probe-based set descriptions and the
//! distances between them, Hausdorff metrics on those descriptions,
//! description-aware dynamical systems, and an envelope/lobe energy
//! pipeline for motion waveforms.
//!
//! The crate is organized around four independent layers:
//!
//! * [`description`] — probe suites, feature-tuple descriptions of finite
//!   sets, the pairwise descriptive distance, and convergence of that
//!   distance along nested probe chains.
//! * [`hausdorff`] — exact Hausdorff distance on finite point sets, its
//!   lift to descriptions, metric balls over collections of described
//!   sets, and finite open-set-algebra checks.
//! * [`dynamics`] — iterated maps on finite or discretized state spaces
//!   with per-state descriptions: orbits, descriptive periodicity, the
//!   set-valued image map, and bounded witness searches for density,
//!   transitivity, and sensitivity.
//! * [`energy`] — uniformly sampled waveforms, Hilbert envelopes, signed
//!   lobe segmentation, trapezoidal lobe energies, and energy-dissipation
//!   stability reports.
//!
//! All values are immutable after construction and every operation is a
//! pure function, so concurrent evaluation needs no coordination.

pub mod description;
pub mod dynamics;
pub mod energy;
pub mod hausdorff;
