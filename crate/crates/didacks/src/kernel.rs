//! Closed-form Gram and right-hand-side entries for constant, monopole,
//! and dipole-component bases over the three supported geometries.
//!
//! The monopole kernel is the fundamental solution `1/|X - X'|` with the
//! source `X'` and the field point `X` in complementary domains, which
//! keeps every basis function bounded. Its defining property is that the
//! inner product of a basis function with a harmonic field reduces to a
//! point evaluation, so the normal equations assemble without any
//! numerical integration.
//!
//! Dipole entries are source-coordinate derivatives of the monopole
//! closed forms. They are produced by forward-mode dual numbers rather
//! than hand-derived formulas; the chain-rule terms through the
//! source-to-interpolation map fall out automatically and the result is
//! exact to machine precision of the backend.

use thiserror::Error;

use crate::dual::Dual;
use crate::geometry::{kelvin_map, GeometryError, Vec3};
use crate::linalg::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("bases live in different geometries")]
    GeometryMismatch,
    #[error("constant basis is only admitted in the spherical interior")]
    ConstantNotAdmitted,
    #[error("source point at |X'| = {radius} violates the {geometry:?} source domain")]
    SourceOutsideDomain { geometry: Geometry, radius: f64 },
    #[error("dipole direction must be a nonzero vector")]
    ZeroDirection,
    #[error("evaluation point at |X| = {radius} lies outside the {geometry:?} field domain")]
    PointOutsideField { geometry: Geometry, radius: f64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Field-domain geometry. Each carries its own inner product:
///
/// * `Interior`: harmonic fields on the closed unit ball, sources outside;
///   the product equals `1/(2 pi)` times the `1/r`-weighted Dirichlet
///   integral plus the product of origin values.
/// * `Exterior`: harmonic fields decaying at least like `1/r` outside the
///   unit sphere, sources inside.
/// * `HalfSpace`: harmonic fields on `z >= 0`, sources below the plane;
///   the product is normalized by `1/(2 pi)` so the replication constant
///   is exactly one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    Interior,
    Exterior,
    HalfSpace,
}

/// One basis function: a constant, a monopole `1/|X - X'|`, or one
/// directional component of a point dipole.
#[derive(Clone, Debug)]
pub struct Basis {
    kind: BasisKind,
    geometry: Geometry,
    /// Source location; `None` for the constant basis.
    source: Option<Vec3>,
    /// Paired interpolation point: the inversion image of the source for
    /// spherical geometries, the mirror image for the half-space.
    interp: Option<Vec3>,
    /// `1.0` when unnormalized, otherwise `1/||basis||`.
    norm_factor: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BasisKind {
    Constant,
    Monopole,
    /// Unit direction along which the source coordinates are differentiated.
    DipoleComponent(Vec3),
}

impl Basis {
    /// Constant basis function (value one everywhere). Interior only: it
    /// is not `1/r`-decaying, so the other geometries reject it.
    pub fn constant(geometry: Geometry) -> Result<Basis, KernelError> {
        if geometry != Geometry::Interior {
            return Err(KernelError::ConstantNotAdmitted);
        }
        Ok(Basis {
            kind: BasisKind::Constant,
            geometry,
            source: None,
            interp: None,
            norm_factor: 1.0,
        })
    }

    pub fn monopole(geometry: Geometry, source: Vec3) -> Result<Basis, KernelError> {
        validate_source(geometry, &source)?;
        let interp = pair_point(geometry, &source);
        Ok(Basis {
            kind: BasisKind::Monopole,
            geometry,
            source: Some(source),
            interp: Some(interp),
            norm_factor: 1.0,
        })
    }

    /// One dipole component; `direction` is normalized internally.
    pub fn dipole(geometry: Geometry, source: Vec3, direction: Vec3) -> Result<Basis, KernelError> {
        validate_source(geometry, &source)?;
        let norm = direction.norm();
        if norm == 0.0 {
            return Err(KernelError::ZeroDirection);
        }
        let interp = pair_point(geometry, &source);
        Ok(Basis {
            kind: BasisKind::DipoleComponent(direction.scale(1.0 / norm)),
            geometry,
            source: Some(source),
            interp: Some(interp),
            norm_factor: 1.0,
        })
    }

    /// Same basis with `norm_factor = 1/||basis||`, making its Gram
    /// self-entry one.
    pub fn normalized(mut self) -> Basis {
        let mut unit = self.clone();
        unit.norm_factor = 1.0;
        let norm = basis_norm::<f64>(&unit).expect("norm of a valid basis");
        self.norm_factor = 1.0 / norm;
        self
    }

    pub fn kind(&self) -> &BasisKind {
        &self.kind
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn source(&self) -> Option<&Vec3> {
        self.source.as_ref()
    }

    /// Interpolation point paired with the source (derived).
    pub fn interp(&self) -> Option<&Vec3> {
        self.interp.as_ref()
    }

    pub fn norm_factor(&self) -> f64 {
        self.norm_factor
    }

    /// Whether this basis row matches a plain point value (constant and
    /// monopole rows do; dipole rows match a derivative quantity).
    pub fn matches_value(&self) -> bool {
        !matches!(self.kind, BasisKind::DipoleComponent(_))
    }
}

fn validate_source(geometry: Geometry, source: &Vec3) -> Result<(), KernelError> {
    let r = source.norm();
    let ok = match geometry {
        Geometry::Interior => r > 1.0,
        Geometry::Exterior => r > 0.0 && r < 1.0,
        Geometry::HalfSpace => source.z < 0.0,
    };
    if ok {
        Ok(())
    } else {
        Err(KernelError::SourceOutsideDomain {
            geometry,
            radius: r,
        })
    }
}

/// Interpolation point paired to a source: inversion through the unit
/// sphere for spherical geometries, mirror through `z = 0` otherwise.
fn pair_point(geometry: Geometry, source: &Vec3) -> Vec3 {
    match geometry {
        Geometry::Interior | Geometry::Exterior => {
            kelvin_map(source).expect("source validated nonzero")
        }
        Geometry::HalfSpace => Vec3::new(source.x, source.y, -source.z),
    }
}

fn pair_point_generic<S: Scalar>(geometry: Geometry, source: &Vec3<S>) -> Vec3<S> {
    match geometry {
        Geometry::Interior | Geometry::Exterior => {
            kelvin_map(source).expect("source validated nonzero")
        }
        Geometry::HalfSpace => Vec3::new(source.x, source.y, -source.z),
    }
}

/// A scalar field with a gradient, the data side of a fit. `value` must
/// be evaluable in any backend so extended-precision assemblies see the
/// probe at full accuracy; the gradient defaults to exact forward-mode
/// differentiation of `value`.
pub trait FieldProbe {
    fn value<S: Scalar>(&self, x: &Vec3<S>) -> S;

    fn gradient<S: Scalar>(&self, x: &Vec3<S>) -> Vec3<S> {
        let value_der = |vx: Vec3<Dual<S>>| self.value(&vx).der;
        let gx = value_der(Vec3::new(
            Dual::variable(x.x),
            Dual::constant(x.y),
            Dual::constant(x.z),
        ));
        let gy = value_der(Vec3::new(
            Dual::constant(x.x),
            Dual::variable(x.y),
            Dual::constant(x.z),
        ));
        let gz = value_der(Vec3::new(
            Dual::constant(x.x),
            Dual::constant(x.y),
            Dual::variable(x.z),
        ));
        Vec3::new(gx, gy, gz)
    }

    fn origin_value<S: Scalar>(&self) -> S {
        self.value(&Vec3::zero())
    }
}

/// Monopole-monopole closed form, generic so dual lifts can
/// differentiate through it (including through the source pairing).
fn mono_mono<S: Scalar>(geometry: Geometry, src_a: &Vec3<S>, src_b: &Vec3<S>) -> S {
    match geometry {
        Geometry::Interior | Geometry::Exterior => {
            let p_a = pair_point_generic(geometry, src_a);
            let p = p_a.norm();
            p / p_a.sub(src_b).norm()
        }
        Geometry::HalfSpace => {
            let mirror = pair_point_generic(geometry, src_a);
            S::one() / mirror.sub(src_b).norm()
        }
    }
}

/// Monopole against the constant basis (interior only): the interpolation
/// radius of the monopole.
fn mono_const<S: Scalar>(src: &Vec3<S>) -> S {
    pair_point_generic(Geometry::Interior, src).norm()
}

/// Lift an `f64` vector into dual numbers seeded along `direction`.
fn seed<S: Scalar>(point: &Vec3, direction: &Vec3) -> Vec3<Dual<S>> {
    Vec3::new(
        Dual::new(S::from_f64(point.x), S::from_f64(direction.x)),
        Dual::new(S::from_f64(point.y), S::from_f64(direction.y)),
        Dual::new(S::from_f64(point.z), S::from_f64(direction.z)),
    )
}

fn lift_const<S: Scalar>(point: &Vec3) -> Vec3<Dual<S>> {
    Vec3::new(
        Dual::constant(S::from_f64(point.x)),
        Dual::constant(S::from_f64(point.y)),
        Dual::constant(S::from_f64(point.z)),
    )
}

/// Inner product of two basis functions in the geometry's norm,
/// including both normalization factors.
pub fn gram_entry<S: Scalar>(a: &Basis, b: &Basis) -> Result<S, KernelError> {
    if a.geometry != b.geometry {
        return Err(KernelError::GeometryMismatch);
    }
    let geometry = a.geometry;

    let raw = match (&a.kind, &b.kind) {
        (BasisKind::Constant, BasisKind::Constant) => S::one(),
        (BasisKind::Constant, BasisKind::Monopole) => {
            mono_const(&b.source.as_ref().unwrap().lift::<S>())
        }
        (BasisKind::Monopole, BasisKind::Constant) => {
            mono_const(&a.source.as_ref().unwrap().lift::<S>())
        }
        (BasisKind::Constant, BasisKind::DipoleComponent(dir)) => {
            mono_const(&seed::<S>(b.source.as_ref().unwrap(), dir)).der
        }
        (BasisKind::DipoleComponent(dir), BasisKind::Constant) => {
            mono_const(&seed::<S>(a.source.as_ref().unwrap(), dir)).der
        }
        (BasisKind::Monopole, BasisKind::Monopole) => mono_mono(
            geometry,
            &a.source.as_ref().unwrap().lift::<S>(),
            &b.source.as_ref().unwrap().lift::<S>(),
        ),
        (BasisKind::DipoleComponent(dir), BasisKind::Monopole) => mono_mono(
            geometry,
            &seed::<S>(a.source.as_ref().unwrap(), dir),
            &lift_const::<S>(b.source.as_ref().unwrap()),
        )
        .der,
        (BasisKind::Monopole, BasisKind::DipoleComponent(dir)) => mono_mono(
            geometry,
            &lift_const::<S>(a.source.as_ref().unwrap()),
            &seed::<S>(b.source.as_ref().unwrap(), dir),
        )
        .der,
        (BasisKind::DipoleComponent(da), BasisKind::DipoleComponent(db)) => {
            // Mixed second derivative: outer dual differentiates the `a`
            // source, inner dual the `b` source.
            let src_a: Vec3<Dual<Dual<S>>> = {
                let s = a.source.as_ref().unwrap();
                Vec3::new(
                    Dual::new(Dual::constant(S::from_f64(s.x)), Dual::constant(S::from_f64(da.x))),
                    Dual::new(Dual::constant(S::from_f64(s.y)), Dual::constant(S::from_f64(da.y))),
                    Dual::new(Dual::constant(S::from_f64(s.z)), Dual::constant(S::from_f64(da.z))),
                )
            };
            let src_b: Vec3<Dual<Dual<S>>> = {
                let s = b.source.as_ref().unwrap();
                Vec3::new(
                    Dual::constant(Dual::new(S::from_f64(s.x), S::from_f64(db.x))),
                    Dual::constant(Dual::new(S::from_f64(s.y), S::from_f64(db.y))),
                    Dual::constant(Dual::new(S::from_f64(s.z), S::from_f64(db.z))),
                )
            };
            mono_mono(geometry, &src_a, &src_b).der.der
        }
    };

    Ok(raw * S::from_f64(a.norm_factor) * S::from_f64(b.norm_factor))
}

/// Inner product of a basis function with the probe field: the normal
/// equations' right-hand side. Reduces to point data of the probe at the
/// basis interpolation point. The probe must be harmonic on the field
/// domain for the replication identity to hold; that is the caller's
/// responsibility (deliberately violating it is how mismatched-data
/// experiments are run).
pub fn rhs_entry<S: Scalar>(a: &Basis, probe: &impl FieldProbe) -> Result<S, KernelError> {
    let raw = match &a.kind {
        BasisKind::Constant => probe.origin_value::<S>(),
        BasisKind::Monopole => {
            let src = a.source.as_ref().unwrap().lift::<S>();
            mono_rhs(a.geometry, &src, probe)
        }
        BasisKind::DipoleComponent(dir) => {
            let src = seed::<S>(a.source.as_ref().unwrap(), dir);
            mono_rhs(a.geometry, &src, probe).der
        }
    };
    Ok(raw * S::from_f64(a.norm_factor))
}

fn mono_rhs<S: Scalar>(geometry: Geometry, src: &Vec3<S>, probe: &impl FieldProbe) -> S {
    let p = pair_point_generic(geometry, src);
    match geometry {
        Geometry::Interior | Geometry::Exterior => p.norm() * probe.value(&p),
        Geometry::HalfSpace => probe.value(&p),
    }
}

/// Norm of a basis function: the square root of its unnormalized Gram
/// self-entry.
pub fn basis_norm<S: Scalar>(a: &Basis) -> Result<S, KernelError> {
    let mut unit = a.clone();
    unit.norm_factor = 1.0;
    Ok(gram_entry::<S>(&unit, &unit)?.sqrt())
}

/// Pointwise evaluation of a basis function at a field point, with the
/// field-domain check. A small tolerance admits points that sit on the
/// domain boundary up to roundoff.
pub fn evaluate_basis<S: Scalar>(a: &Basis, x: &Vec3<S>) -> Result<S, KernelError> {
    const BOUNDARY_SLACK: f64 = 1e-12;
    let ok = match a.geometry {
        Geometry::Interior => x.norm().to_f64() <= 1.0 + BOUNDARY_SLACK,
        Geometry::Exterior => x.norm().to_f64() >= 1.0 - BOUNDARY_SLACK,
        Geometry::HalfSpace => x.z.to_f64() >= -BOUNDARY_SLACK,
    };
    if !ok {
        return Err(KernelError::PointOutsideField {
            geometry: a.geometry,
            radius: x.norm().to_f64(),
        });
    }
    Ok(evaluate_basis_unchecked(a, x))
}

/// Evaluation without the field-domain check. The basis functions are
/// smooth everywhere away from their sources, which quadrature rules
/// sampling a thin shell around the unit sphere rely on.
pub(crate) fn evaluate_basis_unchecked<S: Scalar>(a: &Basis, x: &Vec3<S>) -> S {
    let raw = match &a.kind {
        BasisKind::Constant => S::one(),
        BasisKind::Monopole => {
            let src = a.source.as_ref().unwrap().lift::<S>();
            S::one() / x.sub(&src).norm()
        }
        BasisKind::DipoleComponent(dir) => {
            let src = seed::<S>(a.source.as_ref().unwrap(), dir);
            let x_dual = Vec3::new(
                Dual::constant(x.x),
                Dual::constant(x.y),
                Dual::constant(x.z),
            );
            (Dual::<S>::one() / x_dual.sub(&src).norm()).der
        }
    };
    raw * S::from_f64(a.norm_factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Local probe: f = (x^2 + y^2)/2 - z^2, harmonic everywhere.
    struct Saddle;

    impl FieldProbe for Saddle {
        fn value<S: Scalar>(&self, x: &Vec3<S>) -> S {
            let half = S::from_f64(0.5);
            half * (x.x * x.x + x.y * x.y) - x.z * x.z
        }
    }

    /// Local probe: f = 1/r, harmonic away from the origin.
    struct InverseRadius;

    impl FieldProbe for InverseRadius {
        fn value<S: Scalar>(&self, x: &Vec3<S>) -> S {
            S::one() / x.norm()
        }
    }

    fn mono_at_source(z: f64) -> Basis {
        Basis::monopole(Geometry::Interior, Vec3::new(0.0, 0.0, z)).unwrap()
    }

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} !~ {b} (tol {tol})");
    }

    #[test]
    fn interior_self_entry_closed_form() {
        // P = 1/2 pairs with the source at (0, 0, 2); the self entry is
        // P^2 / (1 - P^2) = 1/3.
        let b = mono_at_source(2.0);
        let g: f64 = gram_entry(&b, &b).unwrap();
        approx(g, 1.0 / 3.0, 1e-15);
    }

    #[test]
    fn interior_pair_entry_and_symmetry() {
        let a = mono_at_source(2.0); // P_a = (0, 0, 0.5)
        let b = Basis::monopole(Geometry::Interior, Vec3::new(2.0, 0.0, 0.0)).unwrap();
        let g_ab: f64 = gram_entry(&a, &b).unwrap();
        let g_ba: f64 = gram_entry(&b, &a).unwrap();
        // P_a / |P_a - X'_b| = 0.5 / sqrt(4.25)
        approx(g_ab, 0.242_535_625_036_332_97, 1e-15);
        approx(g_ab, g_ba, 1e-15 * g_ab.abs());
    }

    #[test]
    fn constant_entries() {
        let c = Basis::constant(Geometry::Interior).unwrap();
        let g: f64 = gram_entry(&c, &c).unwrap();
        approx(g, 1.0, 0.0);

        let m = mono_at_source(2.0);
        let g_mc: f64 = gram_entry(&m, &c).unwrap();
        let g_cm: f64 = gram_entry(&c, &m).unwrap();
        approx(g_mc, 0.5, 1e-15);
        approx(g_cm, 0.5, 1e-15);
    }

    #[test]
    fn constant_rejected_outside_interior() {
        assert_eq!(
            Basis::constant(Geometry::Exterior).unwrap_err(),
            KernelError::ConstantNotAdmitted
        );
        assert_eq!(
            Basis::constant(Geometry::HalfSpace).unwrap_err(),
            KernelError::ConstantNotAdmitted
        );
    }

    #[test]
    fn geometry_mismatch_rejected() {
        let a = mono_at_source(2.0);
        let b = Basis::monopole(Geometry::Exterior, Vec3::new(0.0, 0.0, 0.5)).unwrap();
        assert_eq!(
            gram_entry::<f64>(&a, &b).unwrap_err(),
            KernelError::GeometryMismatch
        );
    }

    #[test]
    fn source_domains_enforced() {
        assert!(matches!(
            Basis::monopole(Geometry::Interior, Vec3::new(0.0, 0.0, 0.5)),
            Err(KernelError::SourceOutsideDomain { .. })
        ));
        assert!(matches!(
            Basis::monopole(Geometry::Exterior, Vec3::new(0.0, 0.0, 2.0)),
            Err(KernelError::SourceOutsideDomain { .. })
        ));
        assert!(matches!(
            Basis::monopole(Geometry::HalfSpace, Vec3::new(0.0, 0.0, 1.0)),
            Err(KernelError::SourceOutsideDomain { .. })
        ));
    }

    #[test]
    fn rhs_interior_values() {
        let m = mono_at_source(2.0);
        let a: f64 = rhs_entry(&m, &Saddle).unwrap();
        // P f(P) with P = (0, 0, 0.5): 0.5 * (-0.25)
        approx(a, -0.125, 1e-15);

        let c = Basis::constant(Geometry::Interior).unwrap();
        let a0: f64 = rhs_entry(&c, &Saddle).unwrap();
        approx(a0, 0.0, 0.0);
    }

    #[test]
    fn rhs_exterior_value() {
        let m = Basis::monopole(Geometry::Exterior, Vec3::new(0.0, 0.0, 0.5)).unwrap();
        let a: f64 = rhs_entry(&m, &InverseRadius).unwrap();
        // P = (0, 0, 2); P * f(P) = 2 * 0.5 = 1.
        approx(a, 1.0, 1e-15);
    }

    #[test]
    fn halfspace_entries_mirror() {
        let a = Basis::monopole(Geometry::HalfSpace, Vec3::new(0.0, 0.0, -1.0)).unwrap();
        let b = Basis::monopole(Geometry::HalfSpace, Vec3::new(1.0, 0.0, -2.0)).unwrap();
        let g_ab: f64 = gram_entry(&a, &b).unwrap();
        let g_ba: f64 = gram_entry(&b, &a).unwrap();
        // 1/|M_a - X'_b| with M_a = (0, 0, 1): 1/sqrt(1 + 9)
        approx(g_ab, 1.0 / 10.0_f64.sqrt(), 1e-15);
        approx(g_ab, g_ba, 1e-16);

        // Replication reduces to evaluation at the mirror point.
        let r: f64 = rhs_entry(&a, &Saddle).unwrap();
        approx(r, Saddle.value(&Vec3::new(0.0, 0.0, 1.0)), 1e-15);
    }

    #[test]
    fn basis_norm_values() {
        let m = mono_at_source(2.0);
        approx(basis_norm::<f64>(&m).unwrap(), (1.0_f64 / 3.0).sqrt(), 1e-15);

        let c = Basis::constant(Geometry::Interior).unwrap();
        approx(basis_norm::<f64>(&c).unwrap(), 1.0, 0.0);

        // The norm collapses with the interpolation radius.
        let deep = mono_at_source(1.0e4); // P = 1e-4
        let n = basis_norm::<f64>(&deep).unwrap();
        approx(n, 1.0e-4, 1e-11);
    }

    #[test]
    fn normalized_self_entry_is_one() {
        for basis in [
            mono_at_source(2.0),
            Basis::dipole(Geometry::Interior, Vec3::new(0.0, 1.0, 2.0), Vec3::new(0.0, 0.0, 1.0))
                .unwrap(),
        ] {
            let n = basis.normalized();
            let g: f64 = gram_entry(&n, &n).unwrap();
            approx(g, 1.0, 1e-12);
        }
    }

    #[test]
    fn evaluate_basis_values_and_domain() {
        let m = mono_at_source(2.0);
        approx(evaluate_basis(&m, &Vec3::zero()).unwrap(), 0.5, 1e-15);

        let c = Basis::constant(Geometry::Interior).unwrap();
        approx(evaluate_basis(&c, &Vec3::new(0.1, 0.2, 0.3)).unwrap(), 1.0, 0.0);

        let d = Basis::dipole(Geometry::Interior, Vec3::new(0.0, 0.0, 2.0), Vec3::new(0.0, 0.0, 1.0))
            .unwrap();
        // d/dz' (1/|x - X'|) at the origin: -z'/|X'|^3 = -2/8.
        approx(evaluate_basis(&d, &Vec3::zero()).unwrap(), -0.25, 1e-15);

        assert!(matches!(
            evaluate_basis(&m, &Vec3::new(0.0, 0.0, 1.5)),
            Err(KernelError::PointOutsideField { .. })
        ));
        let e = Basis::monopole(Geometry::Exterior, Vec3::new(0.0, 0.0, 0.5)).unwrap();
        assert!(matches!(
            evaluate_basis(&e, &Vec3::new(0.1, 0.0, 0.0)),
            Err(KernelError::PointOutsideField { .. })
        ));
    }

    #[test]
    fn dipole_entries_match_finite_differences() {
        let dir = Vec3::new(0.6, 0.0, 0.8);
        let src_a = Vec3::new(0.4, -0.3, 2.1);
        let src_b = Vec3::new(-1.1, 0.5, 1.8);
        let dip = Basis::dipole(Geometry::Interior, src_a, dir).unwrap();
        let mono_b = Basis::monopole(Geometry::Interior, src_b).unwrap();

        let exact: f64 = gram_entry(&dip, &mono_b).unwrap();

        // Richardson-extrapolated central difference of the monopole entry.
        let entry = |h: f64| -> f64 {
            let plus =
                Basis::monopole(Geometry::Interior, src_a.add(&dir.scale(h))).unwrap();
            let minus =
                Basis::monopole(Geometry::Interior, src_a.sub(&dir.scale(h))).unwrap();
            let gp: f64 = gram_entry(&plus, &mono_b).unwrap();
            let gm: f64 = gram_entry(&minus, &mono_b).unwrap();
            (gp - gm) / (2.0 * h)
        };
        let h = 1e-4;
        let fd = (4.0 * entry(h / 2.0) - entry(h)) / 3.0;
        approx(exact, fd, 1e-6 * exact.abs().max(1e-6));
    }

    #[test]
    fn dipole_rhs_matches_finite_differences() {
        let dir = Vec3::new(0.0, 1.0, 0.0);
        let src = Vec3::new(0.3, 0.9, 2.0);
        let dip = Basis::dipole(Geometry::Interior, src, dir).unwrap();
        let exact: f64 = rhs_entry(&dip, &Saddle).unwrap();

        let entry = |h: f64| -> f64 {
            let plus = Basis::monopole(Geometry::Interior, src.add(&dir.scale(h))).unwrap();
            let minus = Basis::monopole(Geometry::Interior, src.sub(&dir.scale(h))).unwrap();
            let rp: f64 = rhs_entry(&plus, &Saddle).unwrap();
            let rm: f64 = rhs_entry(&minus, &Saddle).unwrap();
            (rp - rm) / (2.0 * h)
        };
        let h = 1e-4;
        let fd = (4.0 * entry(h / 2.0) - entry(h)) / 3.0;
        approx(exact, fd, 1e-6 * exact.abs().max(1e-6));
    }

    #[test]
    fn dipole_gram_symmetry_all_kinds() {
        let dip_a = Basis::dipole(Geometry::Interior, Vec3::new(0.0, 0.0, 2.0), Vec3::new(1.0, 0.0, 0.0))
            .unwrap();
        let dip_b = Basis::dipole(Geometry::Interior, Vec3::new(1.5, 0.5, 1.0), Vec3::new(0.0, 1.0, 1.0))
            .unwrap();
        let mono = mono_at_source(3.0);
        let cons = Basis::constant(Geometry::Interior).unwrap();
        for (a, b) in [(&dip_a, &dip_b), (&dip_a, &mono), (&dip_a, &cons)] {
            let ab: f64 = gram_entry(a, b).unwrap();
            let ba: f64 = gram_entry(b, a).unwrap();
            approx(ab, ba, 1e-12 * ab.abs().max(1e-12));
        }
    }

    #[test]
    fn monopole_degenerates_to_constant_near_origin() {
        // As the interpolation point approaches the origin, the scaled
        // basis 1/(P l) tends to the constant function.
        let p = 1e-6;
        let m = mono_at_source(1.0 / p);
        let x = Vec3::new(0.4, -0.2, 0.3);
        let scaled = evaluate_basis(&m, &x).unwrap() / p;
        approx(scaled, 1.0, 1e-5);
    }

    #[test]
    fn probe_gradient_matches_finite_differences() {
        let x = Vec3::new(0.3, -0.2, 0.4);
        let g = Saddle.gradient(&x);
        let h = 1e-5;
        for i in 0..3 {
            let mut xp = x;
            let mut xm = x;
            match i {
                0 => {
                    xp.x += h;
                    xm.x -= h;
                }
                1 => {
                    xp.y += h;
                    xm.y -= h;
                }
                _ => {
                    xp.z += h;
                    xm.z -= h;
                }
            }
            let fd = (Saddle.value(&xp) - Saddle.value(&xm)) / (2.0 * h);
            let gi = [g.x, g.y, g.z][i];
            approx(gi, fd, 1e-6 * gi.abs().max(1.0));
        }
    }
}
