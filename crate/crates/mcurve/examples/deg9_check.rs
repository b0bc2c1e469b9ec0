use mcurve::analyze::{analyze, EngineOptions};
use mcurve::curvefile::parse_curve_file;

fn run(name: &str, text: &str) {
    let cf = parse_curve_file(text).unwrap();
    let t0 = std::time::Instant::now();
    match analyze(&cf, &EngineOptions::default()) {
        Ok(a) => {
            println!("== {name}: {:?}", t0.elapsed());
            println!("  tau = {}, mdr = {}, free = {}, exp = {:?}", a.global.tau, a.global.mdr, a.global.free, a.global.exponents);
            println!("  types: {:?} complete: {:?}", a.type_counts(), a.local_complete);
            if let Some(arr) = &a.arrangement {
                println!("  wc: {} cm: {} tau_comb: {}", arr.wc, arr.cm, arr.tau_combinatorial);
            }
            println!("  maximizing: {} | mcurve: {} | nonex: {}", a.verdicts.maximizing, a.verdicts.m_curve, a.verdicts.nonexistence);
        }
        Err(e) => println!("== {name}: ERROR {e}"),
    }
}

fn main() {
    run("hesse", "\
field: Q(e) minpoly: t^2+t+1
lines:
x
y
z
x + y + z
x + y + e*z
x + y + e^2*z
x + e*y + z
x + e^2*y + z
e*x + y + z
e^2*x + y + z
e*x + e^2*y + z
e^2*x + e*y + z
");
    run("cl8", "\
field: Q
f = x*y*(x^2+y^2-z^2)*(y+x-z)*(y-x-z)*(y+x+z)*(y-x+z)
point: (0:0:1)
point: (1:1:0)
point: (1:-1:0)
point: (0:1:1)
point: (0:1:-1)
point: (1:0:1)
point: (1:0:-1)
");
    run("cl11", "\
field: Q
f = x*y*(x-z)*(x+z)*(y-z)*(y+z)*(y-x-z)*(y-x+z)*(y-x)*(x*y - x^2 - y^2 + z^2)
point: (0:0:1)
point: (0:1:0)
point: (1:0:0)
point: (1:1:0)
point: (0:1:1)
point: (0:1:-1)
point: (1:0:1)
point: (1:0:-1)
point: (1:1:1)
point: (1:1:-1)
point: (1:-1:1)
point: (1:2:1)
point: (1:-1:-1)
point: (1:2:-1)
point: (2:1:1)
point: (2:1:-1)
");
    run("cl12", "\
field: Q(e) minpoly: t^2+t+1
f = x*y*z*(x-z)*(x+z)*(y-z)*(y+z)*(y-x-z)*(y-x+z)*(y-x)*(x*y - x^2 - y^2 + z^2)
point: (0:0:1)
point: (0:1:0)
point: (1:0:0)
point: (1:1:0)
point: (0:1:1)
point: (0:1:-1)
point: (1:0:1)
point: (1:0:-1)
point: (1:1:1)
point: (1:1:-1)
point: (1:-1:1)
point: (1:2:1)
point: (1:-1:-1)
point: (1:2:-1)
point: (2:1:1)
point: (2:1:-1)
point: (1:-e:0)
point: (1:1+e:0)
");
    run("sextic", "\
field: Q(i) minpoly: t^2+1
f = (x^2+y^2+z^2)^3 - 27*x^2*y^2*z^2
point: (0:1:i)
point: (0:1:-i)
point: (1:0:i)
point: (1:0:-i)
point: (1:i:0)
point: (1:-i:0)
point: (1:1:1)
point: (1:1:-1)
point: (1:-1:1)
point: (1:-1:-1)
");
}
