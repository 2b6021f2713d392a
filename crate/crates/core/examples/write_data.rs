//! Regenerates the bundled algebra and module files:
//! `cargo run -p poisson-env-core --example write_data -- data`

use std::fs;
use std::path::PathBuf;

use poisson_env_core::catalog;
use poisson_env_core::io::{write_algebra, write_module};
use poisson_env_core::{Ncpa, QuasiPoissonModule};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    fs::create_dir_all(&dir)?;
    let kxk = catalog::kxk();
    let m2std = catalog::m2_standard();
    let ut2std = catalog::upper_triangular_standard();

    let algebras = [
        ("kxk.alg", kxk.presentation().clone()),
        ("m2std.alg", m2std.presentation().clone()),
        ("trunc2-n2.alg", catalog::trunc2(2).presentation().clone()),
        ("ut2std.alg", ut2std.presentation().clone()),
        ("m2.alg", catalog::m2_presentation()),
        ("bad-assoc.alg", catalog::non_associative_presentation()),
        ("bad-leibniz.alg", catalog::non_leibniz_presentation()),
        ("bad-antisym.alg", catalog::non_antisymmetric_presentation()),
    ];
    for (name, p) in algebras {
        fs::write(dir.join(name), write_algebra(&p))?;
    }

    let reg = QuasiPoissonModule::regular(&kxk);
    let modules: [(&str, &Ncpa, QuasiPoissonModule); 8] = [
        ("kxk-regular.mod", &kxk, reg.clone()),
        (
            "kxk-tensor-square.mod",
            &kxk,
            QuasiPoissonModule::tensor_square(&kxk),
        ),
        (
            "kxk-jordan12.mod",
            &kxk,
            catalog::kxk_jordan_module(4, false),
        ),
        (
            "kxk-jordan21.mod",
            &kxk,
            catalog::kxk_jordan_module(4, true),
        ),
        // quasi-Poisson but breaks {ab, m} = a{b, m} + {a, m}b
        ("kxk-bad-poisson.mod", &kxk, reg.with_lie(reg.left.clone())),
        (
            "m2std-regular.mod",
            &m2std,
            QuasiPoissonModule::regular(&m2std),
        ),
        (
            "m2std-tensor-square.mod",
            &m2std,
            QuasiPoissonModule::tensor_square(&m2std),
        ),
        (
            "ut2std-regular.mod",
            &ut2std,
            QuasiPoissonModule::regular(&ut2std),
        ),
    ];
    for (name, alg, m) in &modules {
        fs::write(dir.join(name), write_module(alg, m))?;
    }
    let trunc = catalog::trunc2(2);
    fs::write(
        dir.join("trunc2-n2-regular.mod"),
        write_module(&trunc, &QuasiPoissonModule::regular(&trunc)),
    )?;
    Ok(())
}
