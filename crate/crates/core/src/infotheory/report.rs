use serde::Serialize;

use super::distribution::Distribution3;
use super::entropy::JointEntropies;
use super::ipf::{interaction_from_fit, ipf_maxent, IpfConfig};
use super::InfoError;

/// The entropy terms, reported again in millibits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Millibits {
    pub h_x: f64,
    pub h_y: f64,
    pub h_z: f64,
    pub h_xy: f64,
    pub h_xz: f64,
    pub h_yz: f64,
    pub h_xyz: f64,
    pub mu_star: f64,
    pub interaction_info: f64,
    pub redundancy: f64,
}

/// All entropy statistics of one trivariate table, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    pub h_x: f64,
    pub h_y: f64,
    pub h_z: f64,
    pub h_xy: f64,
    pub h_xz: f64,
    pub h_yz: f64,
    pub h_xyz: f64,
    pub mu_star: f64,
    pub interaction_info: f64,
    pub redundancy: f64,
    pub ipf_iterations: usize,
    pub mbits: Millibits,
}

impl EntropyReport {
    pub fn compute(dist: &Distribution3, ipf: IpfConfig) -> Result<Self, InfoError> {
        let h = JointEntropies::of(dist);
        let fit = ipf_maxent(dist, ipf)?;
        let mu_star = h.mu_star();
        let interaction_info = interaction_from_fit(dist, &fit);
        let redundancy = mu_star + interaction_info;
        let mb = |v: f64| v * 1000.0;
        Ok(EntropyReport {
            h_x: h.h_x,
            h_y: h.h_y,
            h_z: h.h_z,
            h_xy: h.h_xy,
            h_xz: h.h_xz,
            h_yz: h.h_yz,
            h_xyz: h.h_xyz,
            mu_star,
            interaction_info,
            redundancy,
            ipf_iterations: fit.iterations,
            mbits: Millibits {
                h_x: mb(h.h_x),
                h_y: mb(h.h_y),
                h_z: mb(h.h_z),
                h_xy: mb(h.h_xy),
                h_xz: mb(h.h_xz),
                h_yz: mb(h.h_yz),
                h_xyz: mb(h.h_xyz),
                mu_star: mb(mu_star),
                interaction_info: mb(interaction_info),
                redundancy: mb(redundancy),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::fixtures::xor_triple;

    #[test]
    fn xor_report() {
        let r = EntropyReport::compute(&xor_triple(), IpfConfig::default()).unwrap();
        assert!((r.mu_star + 1.0).abs() < 1e-12);
        assert!((r.interaction_info - 1.0).abs() < 1e-12);
        assert_eq!(r.redundancy, r.mu_star + r.interaction_info);
        assert_eq!(r.mbits.mu_star, r.mu_star * 1000.0);
        assert_eq!(r.ipf_iterations, 1);
    }

    #[test]
    fn json_field_names() {
        let r = EntropyReport::compute(&xor_triple(), IpfConfig::default()).unwrap();
        let value = serde_json::to_value(r).unwrap();
        for key in [
            "h_x",
            "h_y",
            "h_z",
            "h_xy",
            "h_xz",
            "h_yz",
            "h_xyz",
            "mu_star",
            "interaction_info",
            "redundancy",
            "ipf_iterations",
            "mbits",
        ] {
            assert!(value.get(key).is_some(), "missing {key}");
        }
        assert!(value["mbits"].get("mu_star").is_some());
    }
}
