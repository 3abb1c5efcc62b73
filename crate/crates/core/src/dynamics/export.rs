use std::io::Write;

use super::simulate::{Termination, Trajectory};
use super::sweep::SweepOutcome;

/// Writes `t,x,event`. The vanishing event, if any, is attached to the last
/// recorded state.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["t", "x", "event"])?;
    let last = traj.states.len() - 1;
    for (t, x) in traj.states.iter().enumerate() {
        let event = match traj.termination {
            Termination::Vanished { cause, .. } if t == last => cause.event_label(),
            _ => "",
        };
        writer.write_record([t.to_string(), x.to_string(), event.to_string()])?;
    }
    writer.flush()?;
    Ok(())
}

/// Writes `param,run,termination_step`; runs that reached the cap leave the
/// step empty.
pub fn write_sweep_csv<W: Write>(outcome: &SweepOutcome, out: W) -> csv::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["param", "run", "termination_step"])?;
    for record in &outcome.runs {
        writer.write_record([
            record.param.to_string(),
            record.run.to_string(),
            record.termination_step.map(|s| s.to_string()).unwrap_or_default(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{simulate, MapKind, RootPolicy, SimConfig, VanishCause};

    #[test]
    fn trajectory_csv_marks_vanishing_row() {
        let cfg =
            SimConfig::new(MapKind::organization(1.0).unwrap(), 0.5, 10, 0, RootPolicy::AlwaysPlus).unwrap();
        let traj = simulate(&cfg).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,x,event\n0,0.5,\n1,2,vanished:negative_denominator\n");
        assert_eq!(VanishCause::NoRealRoot.event_label(), "vanished:no_real_root");
    }

    #[test]
    fn completed_trajectory_has_no_events() {
        let cfg = SimConfig::new(MapKind::logistic(2.0).unwrap(), 0.5, 2, 0, RootPolicy::default()).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&simulate(&cfg).unwrap(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,x,event\n0,0.5,\n1,0.5,\n2,0.5,\n");
    }
}
