use mixcert::exactlin::rational::{int, sign_power};
use mixcert::fedotov::{
    collapse, construct, construct_counterexample_k2, k2_base, reduce_to_general_k, verify_certificate,
    verify_certificate_json, Certificate, CertificateKind,
};
use mixcert::hypmat::DEFAULT_ENUMERATION_CAP;
use mixcert::mixvol::{mixed_volume, mixed_volume_via_derivatives, BodyTuple};
use num_traits::{Signed, Zero};

const CAP: usize = DEFAULT_ENUMERATION_CAP;

#[test]
fn k2_certificate_n4() {
    let c = construct_counterexample_k2(4, CAP).unwrap();
    assert_eq!(c.kind, CertificateKind::HodgeRiemann);
    assert!(c.x_my.as_ref().unwrap().is_zero());
    assert!(c.x_mx.as_ref().unwrap().is_positive());
    assert!((sign_power(c.violation.subset.len()) * &c.violation.det).is_positive());
    let v = verify_certificate(&c);
    assert!(v.valid(), "{:?}", v.failures);
}

#[test]
fn k2_certificate_n5() {
    let c = construct(5, 2, CAP).unwrap();
    assert!(verify_certificate(&c).valid());
}

#[test]
fn k3_reduction_n6() {
    let base = k2_base(6).unwrap();
    let r = reduce_to_general_k(&base, 3, CAP).unwrap();
    assert_eq!(r.collapsed, base.matrix.entries);
    assert_eq!(r.certificate.x_mx.as_ref(), Some(&base.x_mx));
    assert_eq!(r.certificate.x_my.as_ref(), Some(&base.x_my));
    let v = verify_certificate(&r.certificate);
    assert!(v.valid(), "{:?}", v.failures);
}

#[test]
fn k2_passthrough_collapses_to_base() {
    let base = k2_base(4).unwrap();
    let r = reduce_to_general_k(&base, 2, CAP).unwrap();
    assert_eq!(r.collapsed, base.matrix.entries);
    assert_eq!(collapse(&r.matrix.entries, 2).unwrap(), base.matrix.entries);
    assert!(verify_certificate(&r.certificate).valid());
}

#[test]
fn bounds() {
    assert!(construct(3, 2, CAP).is_err());
    assert!(construct(5, 3, CAP).is_err());
    assert!(construct(6, 1, CAP).is_err());
}

#[test]
fn json_roundtrip_is_exact() {
    let c = construct_counterexample_k2(4, CAP).unwrap();
    let s = c.to_json();
    let back = Certificate::from_json(&s).unwrap();
    assert_eq!(back, c);
    assert_eq!(back.to_json(), s);
    assert!(verify_certificate_json(&s).valid());
}

#[test]
fn tampering_is_detected() {
    let c = construct_counterexample_k2(4, CAP).unwrap();

    let mut bad = c.clone();
    bad.matrix[0][1] += int(1);
    bad.matrix[1][0] += int(1);
    assert!(!verify_certificate(&bad).valid());

    let mut bad = c.clone();
    bad.violation.subset = vec![0];
    assert!(!verify_certificate(&bad).valid());

    let mut bad = c.clone();
    bad.x[0] += int(1);
    assert!(!verify_certificate(&bad).valid());

    let mut bad = c.clone();
    bad.bodies[0].widths[0] = int(0);
    assert!(!verify_certificate(&bad).valid());

    assert!(!verify_certificate_json("{\"version\": 1}").valid());
}

#[test]
fn builder_and_verifier_paths_agree_on_entries() {
    let c = construct_counterexample_k2(4, CAP).unwrap();
    let bodies = c.body_boxes().unwrap();
    for (i, a) in bodies.iter().enumerate().take(6) {
        for (j, b) in bodies.iter().enumerate().take(6) {
            let t = BodyTuple::new(4, vec![(a.clone(), 2), (b.clone(), 2)]).unwrap();
            assert_eq!(mixed_volume(&t), c.matrix[i][j]);
            assert_eq!(mixed_volume_via_derivatives(&t), c.matrix[i][j]);
        }
    }
}
