//! Transfer to `GL(n', D)` and the transfer-of-measure constant κ.

use num_rational::BigRational;
use serde::Serialize;

use crate::degrees::Scalar;
use crate::error::{Error, Result};
use crate::exactalg::RatFunc;
use crate::groupdata::iwahori_volume;
use crate::invariants::FundamentalInvariants;
use crate::plancherel::{density, ComponentSpec, DensityReport};

/// `λ(D/F) = Π (q^m - 1)^{-1}` over `1 ≤ m ≤ n-1` with `d ∤ m`, `n = d n'`.
pub fn lambda_df(d: u32, n_prime: u32) -> Result<RatFunc> {
    check_dn(d, n_prime)?;
    let n = (d * n_prime) as i64;
    Ok((1..n)
        .filter(|m| m % d as i64 != 0)
        .fold(RatFunc::one(), |acc, m| &acc / &RatFunc::q_pow_minus_one(m)))
}

/// `d(St_{GL(n', D)}) = (1/n) Π_{j=1}^{n'-1} (q^{dj} - 1)`.
pub fn steinberg_fd_division(d: u32, n_prime: u32) -> Result<RatFunc> {
    check_dn(d, n_prime)?;
    let d = d as i64;
    let n = d * n_prime as i64;
    Ok((1..n_prime as i64).fold(RatFunc::ratio(1, n), |acc, j| {
        &acc * &RatFunc::q_pow_minus_one(d * j)
    }))
}

fn check_dn(d: u32, n_prime: u32) -> Result<()> {
    if d < 1 || n_prime < 1 {
        return Err(Error::Input(format!(
            "d and n' must be positive, got d = {d}, n' = {n_prime}"
        )));
    }
    Ok(())
}

/// `dν'(ω') = λ(D/F) dν(JL(ω'))`: same torus factors, constant scaled by λ.
/// Membership of the component in the image of the correspondence is the
/// caller's responsibility.
pub fn transfer_density(report: &DensityReport, d: u32, n_prime: u32) -> Result<DensityReport> {
    let lambda = lambda_df(d, n_prime)?;
    if report.levi.n != d * n_prime {
        return Err(Error::Input(format!(
            "the component lives in GL({}), not GL({})",
            report.levi.n,
            d * n_prime
        )));
    }
    let mut out = report.clone();
    out.constant = &report.constant * &lambda;
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Kappa {
    /// density / (reference density with `q_K = q^r`)
    pub kappa: Scalar,
    /// `μ_0(I) = 1/P_{S_e}(q^r)` on `GL(e, K)`
    #[serde(serialize_with = "ser_display")]
    pub mu0_iwahori: RatFunc,
    /// `μ(J)/dim λ = μ_0(I)/κ`
    pub volume_over_dim: Scalar,
}

fn ser_display<T: std::fmt::Display, S: serde::Serializer>(
    v: &T,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Divide the density of a single-cuspidal component by the density of the
/// matching component of the Iwahori block of `GL(e, K)`, `q_K = q^r`.
/// The quotient of total measures (constant, formal degree and mass) must
/// be free of torus variables.
pub fn kappa(spec: &ComponentSpec) -> Result<Kappa> {
    let [c] = spec.inv.cuspidals.as_slice() else {
        return Err(Error::MixedCuspidal(format!(
            "κ needs a single cuspidal, got {}",
            spec.inv.cuspidals.len()
        )));
    };
    let r = c.r as u64;
    let reference = ComponentSpec::new(
        FundamentalInvariants::iwahori(spec.inv.q, c.e),
        spec.partitions.clone(),
    )?;
    let a = density(spec)?;
    let b = density(&reference)?;
    let b_factors = b.factors.substitute_q_power(r);
    if a.factors != b_factors {
        return Err(Error::NotProportional(format!(
            "torus parts differ: {} vs {}",
            a.factors, b_factors
        )));
    }
    let total = |rep: &DensityReport, sub: u64| -> Scalar {
        let mass = RatFunc::from_rational(rep.canonical_mass.clone());
        Scalar {
            exact: &(&rep.constant.substitute_q_power(sub)
                * &rep.formal_degree.exact.substitute_q_power(sub))
                * &mass,
            numeric: rep.formal_degree.numeric,
        }
    };
    let kappa = total(&a, 1).div(&total(&b, r));
    let mu0_iwahori = iwahori_volume(c.e).substitute_q_power(r);
    let volume_over_dim = Scalar::exact(mu0_iwahori.clone()).div(&kappa);
    Ok(Kappa {
        kappa,
        mu0_iwahori,
        volume_over_dim,
    })
}

/// The mass ratio `Π (l m / r) / Π l = (m/r)^k`.
pub fn mass_ratio(spec: &ComponentSpec) -> BigRational {
    let base: BigRational = spec
        .segments
        .iter()
        .map(|s| BigRational::from_integer(s.seg.l.into()))
        .product();
    spec.canonical_mass() / base
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degrees::steinberg_fd;
    use crate::exactalg::parse_ratfunc;
    use crate::invariants::{CuspidalDatum, FormalDegreeInput};
    use crate::plancherel::{integrate, select_component};

    #[test]
    fn lambda_examples() {
        for n in 1..5 {
            assert!(lambda_df(1, n).unwrap().is_one());
        }
        let expect = parse_ratfunc("1/((q - 1)*(q^3 - 1)*(q^5 - 1))").unwrap();
        assert_eq!(lambda_df(2, 3).unwrap(), expect);
        assert_eq!(lambda_df(2, 1).unwrap(), parse_ratfunc("1/(q - 1)").unwrap());
        assert!(lambda_df(0, 1).is_err());
    }

    #[test]
    fn division_steinberg() {
        for n in 1..6 {
            assert_eq!(steinberg_fd_division(1, n).unwrap(), steinberg_fd(n));
        }
        assert_eq!(steinberg_fd_division(2, 1).unwrap(), RatFunc::ratio(1, 2));
        assert!((steinberg_fd_division(2, 2).unwrap().eval(2.0) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn steinberg_circle_transfer() {
        let spec = select_component(&FundamentalInvariants::iwahori(2, 2), "2").unwrap();
        let r = density(&spec).unwrap();
        assert_eq!(transfer_density(&r, 1, 2).unwrap().constant, r.constant);
        let t = transfer_density(&r, 2, 1).unwrap();
        assert_eq!(t.factors, r.factors);
        for q in [2.0, 3.0, 5.0] {
            assert!((integrate(&t, q, 64).unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(matches!(transfer_density(&r, 2, 3), Err(Error::Input(_))));
    }

    #[test]
    fn kappa_iwahori_is_one() {
        let inv = FundamentalInvariants::iwahori(3, 3);
        for sel in ["3", "2+1", "1+1+1"] {
            let k = kappa(&select_component(&inv, sel).unwrap()).unwrap();
            assert!(k.kappa.exact.is_one() && k.kappa.is_exact());
        }
    }

    #[test]
    fn kappa_constant_across_partitions() {
        let c = CuspidalDatum::new(2, 3, 2).with_delta(1);
        let inv = FundamentalInvariants::single(2, c);
        let ks: Vec<_> = ["3", "2+1", "1+1+1"]
            .iter()
            .map(|s| kappa(&select_component(&inv, s).unwrap()).unwrap().kappa)
            .collect();
        assert!(ks.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn kappa_mass_ratio() {
        let d0 = parse_ratfunc("q^2 - 1").unwrap();
        let c = CuspidalDatum::new(2, 2, 1)
            .with_conductor(3)
            .with_degree(FormalDegreeInput::Exact(d0.clone()));
        let spec = select_component(&FundamentalInvariants::single(2, c), "1+1").unwrap();
        assert_eq!(mass_ratio(&spec), BigRational::from_integer(4.into()));
        let k = kappa(&spec).unwrap();
        let g_f = crate::groupdata::gamma_factor(&crate::groupdata::LeviShape::new(vec![2, 2]).unwrap());
        let g_k = crate::groupdata::gamma_factor(&crate::groupdata::LeviShape::new(vec![1, 1]).unwrap());
        let expect = &(&(&RatFunc::q_pow_int(3) * &(&g_f / &g_k)) * &d0.pow(2)) * &RatFunc::from_int(4);
        assert_eq!(k.kappa.exact, expect);
    }
}
