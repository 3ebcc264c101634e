use chirplab::chirp_model::CanonicalChirp;
use chirplab::reconstruction::{reconstruct, DetectionConfig};
use chirplab::sampling::{generate_samples, SamplingConfig};
use chirplab::Complex64;

fn main() {
    let truth = vec![
        CanonicalChirp::new(Complex64::from_polar(1.0, 0.4), 4.2, 0.05),
        CanonicalChirp::new(Complex64::from_polar(0.7, -1.1), 11.9, -0.12),
        CanonicalChirp::new(Complex64::from_polar(0.4, 2.3), 19.5, 0.3),
    ];
    let samples = generate_samples(&SamplingConfig::new(1.0, 1234, 5000).unwrap());
    let values: Vec<Complex64> = samples.points.iter()
        .map(|p| truth.iter().fold(Complex64::new(0.0,0.0), |a,c| a + c.evaluate(p.location)))
        .collect();
    let mut config = DetectionConfig::new((0.0, 22.0), (-0.4, 0.4), 5000, 0.05).unwrap();
    config.max_components = 6;
    let report = reconstruct(&values, &samples, &config).unwrap();
    println!("trace: {:?}", report.residual_trace);
    for t in &truth {
        let f = report.components.iter().min_by(|a,b| (a.omega0-t.omega0).abs().total_cmp(&(b.omega0-t.omega0).abs())).unwrap();
        println!("omega0 {:>5}: dw {:.3e} dc {:.3e} relamp {:.4e}  (|B| {})",
            t.omega0, (f.omega0-t.omega0).abs(), (f.rate-t.rate).abs(),
            (f.amplitude-t.amplitude).norm()/t.amplitude.norm(), t.amplitude.norm());
    }
}
