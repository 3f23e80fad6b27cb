//! Wildfire suppression feasibility with drone swarms.
//!
//! * [`physics`]: critical water flow needed to arrest a fire front.
//! * [`swarm`]: platform throughput, arrestable front length, drone counts.
//! * [`ca`]: stochastic cellular-automaton spread with a drone water line.
//! * [`scenario`]: JSON scenario files, random fields and CSV/ASCII output.
//! * [`experiment`]: replicated Monte Carlo runs over a scenario.
//! * [`figures`]: curve bundles for the critical-flow, swarm and spread analyses.

pub mod ca;
pub mod experiment;
pub mod figures;
pub mod physics;
pub mod scenario;
pub mod swarm;
