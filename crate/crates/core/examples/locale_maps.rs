//! Maps of finite locales: FR2 holds for the open inclusion and fails for
//! the non-injective map from the 2-point discrete space to a point; the
//! closed point of the Sierpinski space is semiopen but not weakly open.

use quantic::catalog::locale::{discrete_two_to_point, open_inclusion, sierpinski_closed_point};
use quantic::openness::frobenius_report;
use quantic::quantale::CheckConfig;

fn main() {
    let cfg = CheckConfig::default();
    for (name, p) in [
        ("discrete two points -> point", discrete_two_to_point()),
        ("open inclusion", open_inclusion()),
        ("Sierpinski closed point", sierpinski_closed_point()),
    ] {
        let r = frobenius_report(&p, &cfg).unwrap();
        println!("{name}:");
        println!("  semiopen: {}", r.semiopen.is_ok());
        println!("  FR1 witness: {:?}", r.fr1.and_then(|c| c.witness));
        println!("  FR2 witness: {:?}", r.fr2.and_then(|c| c.witness));
        println!("  open as a locale map: {:?}", r.locale_open);
    }
}
