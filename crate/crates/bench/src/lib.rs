//! Shared fixtures for the benchmarks in `benches/`.

use tripod_core::{MediumSpec, OperatingPoint, PulseSpec, TripodParams};

/// The two gate operating points with fitted pulses.
pub fn operating_points() -> [(&'static str, TripodParams, MediumSpec, PulseSpec); 2] {
    let fit =
        |p: TripodParams, m: MediumSpec| PulseSpec::fitted(&p, &m).expect("positive velocities");
    [
        (
            "quantum",
            TripodParams::quantum(),
            MediumSpec::quantum(),
            fit(TripodParams::quantum(), MediumSpec::quantum()),
        ),
        (
            "semiclassical",
            TripodParams::semiclassical(),
            MediumSpec::semiclassical(),
            fit(TripodParams::semiclassical(), MediumSpec::semiclassical()),
        ),
    ]
}

pub fn semiclassical_point() -> OperatingPoint {
    let [_, (_, p, m, s)] = operating_points();
    OperatingPoint::evaluate(p, m, s).expect("semiclassical point evaluates")
}
