//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fail.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::path::{Path, PathBuf};
use std::process::Command;

use ahp_core::consistency::rank_vector;
use ahp_core::hierarchy::{Action, Extension, HierarchyModel, Selector};
use ahp_core::io;
use ahp_core::kendall::pd_weights;
use ahp_core::{
    kendall_w, pd_global, pd_single, principal_eigen, Cell, PairwiseMatrix, PowerIteration, ReversalWeights,
};
use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use http_body_util::BodyExt;
use num_rational::Rational64;
use proptest::test_runner::{Config, TestRunner};
use serde_json::{json, Value};
use tower::ServiceExt;

type Outcome = Result<(), String>;
type Check = Box<dyn Fn() -> Outcome>;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn matrix(name: &str) -> PairwiseMatrix {
    io::read_matrix(&root().join("fixtures").join(name)).unwrap()
}

fn model(name: &str) -> HierarchyModel {
    io::read_hierarchy(&root().join("fixtures").join(name)).unwrap()
}

fn close(what: &str, got: &[f64], want: &[f64], tol: f64) -> Outcome {
    let ok = got.len() == want.len() && got.iter().zip(want).all(|(g, w)| (g - w).abs() <= tol);
    if ok {
        Ok(())
    } else {
        Err(format!("{what}: got {got:.5?}, want {want:?} within {tol}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn eigen_pair() -> Outcome {
    let p = principal_eigen(&matrix("A1sigma.csv"), PowerIteration::default()).map_err(|e| e.to_string())?;
    let v = close(
        "eigenvector",
        &p.weights,
        &[0.4565, 0.2476, 0.1523, 0.0940, 0.0496],
        5e-4,
    );
    let l = close("lambda_max", &[p.lambda_max], &[4.9824], 5e-4);
    match (l, v) {
        (Ok(()), Ok(())) => Ok(()),
        (l, v) => Err([l.err(), v.err()].into_iter().flatten().collect::<Vec<_>>().join("; ")),
    }
}

#[allow(clippy::approx_constant)]
fn car_tables() -> Outcome {
    let tables: [(&str, &[f64]); 5] = [
        ("table1.csv", &[0.0987, 0.4250, 0.1686, 0.3078]),
        ("table2.csv", &[0.7071, 0.0702, 0.2227]),
        ("table3.csv", &[0.0633, 0.1939, 0.7429]),
        ("table4.csv", &[0.1818, 0.2727, 0.5455]),
        ("table5.csv", &[0.7049, 0.2109, 0.0841]),
    ];
    for (name, want) in tables {
        let p = principal_eigen(&matrix(name), PowerIteration::default()).map_err(|e| e.to_string())?;
        close(name, &p.weights, want, 5e-4)?;
    }
    let eval = model("car.json").evaluate().map_err(|e| e.to_string())?;
    close("final weights", &eval.final_weights, &[0.3443, 0.2002, 0.4556], 1e-3)?;
    ensure(eval.ranking[0] == "Honda Civic", || {
        format!("winner {}", eval.ranking[0])
    })
}

fn table6() -> Outcome {
    let p = principal_eigen(&matrix("table6.csv"), PowerIteration::default()).map_err(|e| e.to_string())?;
    close("table 6", &p.weights, &[0.4292, 0.3018, 0.1683, 0.1007], 5e-4)?;
    let eval = model("car_table6.json").evaluate().map_err(|e| e.to_string())?;
    close(
        "modified final weights",
        &eval.final_weights,
        &[0.3417, 0.1998, 0.4585],
        1e-3,
    )
}

fn single_reversal_degrees() -> Outcome {
    let a1 = pd_single(&matrix("A1.csv")).map_err(|e| e.to_string())?;
    ensure(a1 == 0.0, || format!("p_d(A1) = {a1}"))?;
    let a2m = pd_single(&matrix("A2m.csv")).map_err(|e| e.to_string())?;
    close("p_d(A2m)", &[a2m], &[0.6160], 5e-4)?;
    let out = Command::new(env!("CARGO_BIN_EXE_ahp-rsb"))
        .args(["analyze", "fixtures/A2m.csv", "--json"])
        .current_dir(root())
        .output()
        .map_err(|e| e.to_string())?;
    let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    close(
        "CLI pd",
        &[v["matrices"][0]["pd"].as_f64().unwrap_or(f64::NAN)],
        &[0.6160],
        5e-4,
    )
}

fn weight_concordance() -> Outcome {
    let w3 = model("W3.json").evaluate().map_err(|e| e.to_string())?;
    let c = kendall_w(w3.weight_table.alt_weights()).map_err(|e| e.to_string())?;
    ensure(
        c.s == Rational64::from_integer(2) && c.s_max == Rational64::from_integer(32),
        || format!("S = {}, S_max = {}", c.s, c.s_max),
    )?;
    ensure(c.k_exact() == Rational64::new(1, 16), || {
        format!("K(W3) = {}", c.k_exact())
    })?;
    let pd = pd_weights(&w3.weight_table).map_err(|e| e.to_string())?;
    ensure(pd == 0.9375, || format!("p_d(W3) = {pd}"))?;
    let car = model("car.json").evaluate().map_err(|e| e.to_string())?;
    ensure(car.pd.weights == 0.9375, || format!("car p_d(W) = {}", car.pd.weights))
}

fn global_aggregation() -> Outcome {
    let nu = ReversalWeights::new(vec![0.0; 4], 0.5, 0.5).map_err(|e| e.to_string())?;
    let g = pd_global(&[0.0; 4], 0.1062, 0.9375, &nu).map_err(|e| e.to_string())?;
    close("p_d(G)", &[g], &[0.5219], 1e-4)
}

fn rank_oracle() -> Outcome {
    let r = rank_vector(&[0.7, 0.4, 0.3, 0.4, 0.2]).map_err(|e| e.to_string())?;
    ensure(r.ranks() == [5, 3, 2, 4, 1], || format!("ranks {:?}", r.ranks()))
}

fn weight_extension(w: &[i64], new: i64) -> Extension {
    Extension {
        row: w.iter().map(|&x| Cell::from_ratio(Rational64::new(new, x))).collect(),
        column: w.iter().map(|&x| Cell::from_ratio(Rational64::new(x, new))).collect(),
    }
}

fn weakly_ordered(weights: &[f64], labels: &[String], order: &[&str]) -> bool {
    let at = |l: &str| weights[labels.iter().position(|x| x == l).unwrap()];
    order.windows(2).all(|p| at(p[0]) >= at(p[1]) - 1e-12)
}

fn equilibrium() -> Outcome {
    let a1 = model("a1sigma_single.json");
    let del = a1
        .what_if(&Action::DeleteAlternative {
            alternative: Selector::Label("x5".into()),
        })
        .map_err(|e| e.to_string())?;
    ensure(del.ranking_after == ["x1", "x3", "x4", "x2"] && del.equilibrium, || {
        format!("delete x5: {del:?}")
    })?;
    let add: Action = serde_json::from_str(&std::fs::read_to_string(root().join("fixtures/add_x6.json")).unwrap())
        .map_err(|e| e.to_string())?;
    let add = a1.what_if(&add).map_err(|e| e.to_string())?;
    ensure(
        add.ranking_after == ["x1", "x3", "x4", "x5", "x6", "x2"] && add.equilibrium,
        || format!("add x6: {add:?}"),
    )?;

    let w1 = model("W1.json");
    let before = w1.evaluate().map_err(|e| e.to_string())?;
    let order = ["x2", "x3", "x1"];
    ensure(weakly_ordered(&before.final_weights, w1.alternatives(), &order), || {
        format!("W1 final {:?}", before.final_weights)
    })?;
    let judgments = [[1, 9, 8, 4], [1, 9, 1, 1], [1, 9, 4, 2], [1, 5, 3, 2]]
        .iter()
        .map(|w| weight_extension(&w[..3], w[3]))
        .collect();
    let w2 = w1
        .apply(&Action::AddAlternative {
            label: "x4".into(),
            judgments,
        })
        .map_err(|e| e.to_string())?;
    let after = w2.evaluate().map_err(|e| e.to_string())?;
    ensure(weakly_ordered(&after.final_weights, w2.alternatives(), &order), || {
        format!("W2 final {:?}", after.final_weights)
    })?;
    let printed = model("W2.json").evaluate().map_err(|e| e.to_string())?;
    ensure(
        weakly_ordered(&printed.final_weights, printed.weight_table.alternatives(), &order),
        || format!("W2 fixture final {:?}", printed.final_weights),
    )
}

fn property_suites() -> Outcome {
    ensure(support::CASES >= 200, || format!("only {} cases", support::CASES))?;
    let mut failed = Vec::new();
    for (name, suite) in support::SUITES {
        let mut runner = TestRunner::new(Config {
            cases: support::CASES,
            failure_persistence: None,
            ..Config::default()
        });
        if let Err(e) = suite(&mut runner) {
            failed.push(format!("{name}: {e}"));
        }
    }
    ensure(failed.is_empty(), || failed.join("; "))
}

async fn call(app: &axum::Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, String) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(v) => req
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(v.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8_lossy(&bytes).into_owned())
}

async fn service_contract() -> Outcome {
    let app = ahp_service::router(ahp_service::AppState::ephemeral());
    let car: Value = serde_json::from_str(&std::fs::read_to_string(root().join("fixtures/car.json")).unwrap()).unwrap();
    let (status, text) = call(&app, "POST", "/sessions", Some(json!({ "model": car }))).await;
    ensure(status == StatusCode::CREATED, || format!("create: {status} {text}"))?;
    let v: Value = serde_json::from_str(&text).unwrap();
    let id = v["id"].as_str().unwrap().to_string();

    let (_, before) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    let (status, text) = call(
        &app,
        "POST",
        &format!("/sessions/{id}/whatif"),
        Some(json!({ "action": "delete_alternative", "alternative": "Acura TL" })),
    )
    .await;
    ensure(status == StatusCode::OK, || format!("whatif: {status} {text}"))?;
    let (_, after) = call(&app, "GET", &format!("/sessions/{id}"), None).await;
    let rev = |s: &str| serde_json::from_str::<Value>(s).unwrap()["revision"].clone();
    ensure(
        rev(&before) == json!(1) && rev(&after) == json!(1) && before == after,
        || "whatif changed the session".into(),
    )?;

    // a_12 = 1/4 under Price; 6 gives theta = 3/2.
    let (status, text) = call(
        &app,
        "PUT",
        &format!("/sessions/{id}/judgment"),
        Some(json!({ "matrix": "Price", "i": 2, "j": 1, "value": "6" })),
    )
    .await;
    let err: Value = serde_json::from_str(&text).unwrap_or(Value::Null);
    ensure(status == StatusCode::UNPROCESSABLE_ENTITY, || {
        format!("put: {status} {text}")
    })?;
    ensure(
        err["theta_exact"] == "3/2" && err["suggestion"]["theta_exact"] == "2/3",
        || format!("422 body {text}"),
    )?;
    ensure(
        err["suggestion"]["a_ij"].is_string() && err["suggestion"]["a_ji"].is_string(),
        || format!("422 repair {text}"),
    )?;

    let uri = format!("/sessions/{id}/report");
    let (s1, r1) = call(&app, "GET", &uri, None).await;
    let (s2, r2) = call(&app, "GET", &uri, None).await;
    ensure(s1 == StatusCode::OK && s2 == StatusCode::OK && r1 == r2, || {
        "reports differ".into()
    })
}

fn main() {
    let runtime = tokio::runtime::Builder::new_current_thread().build().unwrap();
    let criteria: Vec<(&str, Check)> = vec![
        ("eigen pair of A1 sigma", Box::new(eigen_pair)),
        ("car tables 1-5 and final weights", Box::new(car_tables)),
        ("table 6 and modified final weights", Box::new(table6)),
        ("p_d(A1) and p_d(A2m)", Box::new(single_reversal_degrees)),
        ("weight concordance K(W3) and p_d(W)", Box::new(weight_concordance)),
        ("global reversal aggregation", Box::new(global_aggregation)),
        ("rank vector oracle", Box::new(rank_oracle)),
        ("ranking equilibrium regressions", Box::new(equilibrium)),
        ("property suites", Box::new(property_suites)),
        (
            "service contract",
            Box::new(move || runtime.block_on(service_contract())),
        ),
    ];
    let mut failures = 0;
    for (name, check) in &criteria {
        let outcome =
            std::panic::catch_unwind(std::panic::AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(()) => println!("PASS  {name}"),
            Err(why) => {
                failures += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
