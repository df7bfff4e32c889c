use std::io::Write;

use iboss_core::harness::{fit_method, method_seed, MethodSettings};
use iboss_core::sim::{gen_design, gen_response, mse, selection_metrics, DesignDist, DesignSpec, Placement, TrueModel};
use iboss_core::{
    cv_fit, iboss_select, load_csv, sis_iboss_select, train_test_split, CvParams, Dataset, Method, ResponseColumn,
    SubdataIndex,
};

fn simulated(n: usize, p: usize, seed: u64) -> (Dataset, TrueModel) {
    let model = TrueModel::generate(p, Placement::First, 1.0, seed).unwrap();
    let cols = gen_design(&DesignSpec {
        dist: DesignDist::T2,
        n,
        p,
        seed: seed + 1,
    });
    let y = gen_response(&cols, &model, seed + 2).unwrap();
    (Dataset::new(cols, y).unwrap(), model)
}

#[test]
fn csv_to_subdata_fit() {
    let (d, model) = simulated(4000, 12, 1);
    let mut file = tempfile::NamedTempFile::new().unwrap();
    write!(file, "y").unwrap();
    for j in 0..d.p() {
        write!(file, ",x{j}").unwrap();
    }
    writeln!(file).unwrap();
    for i in 0..d.n() {
        write!(file, "{}", d.response()[i]).unwrap();
        for v in d.row(i) {
            write!(file, ",{v}").unwrap();
        }
        writeln!(file).unwrap();
    }
    file.flush().unwrap();

    let loaded = load_csv(file.path(), &ResponseColumn::Name("y".into()), true).unwrap();
    assert_eq!((loaded.n(), loaded.p()), (4000, 12));
    // Rust's float formatting round-trips exactly.
    assert_eq!(loaded.column(5), d.column(5));

    let split = train_test_split(&loaded, 500, 3).unwrap();
    let train = loaded.subset_rows(&split.train_indices);
    let test = loaded.subset_rows(&split.test_indices);
    let idx = iboss_select(&train, 400).unwrap();
    let (_, fit) = cv_fit(&train.subset_rows(&idx.rows), &CvParams::default()).unwrap();
    let beta = fit.beta();
    let sel = selection_metrics(&model.beta, &beta).unwrap();
    assert_eq!(sel.sensitivity, 1.0);
    assert!(mse(&test, &model.beta, &beta).unwrap() < 0.05);
}

#[test]
fn index_files_round_trip() {
    let (d, _) = simulated(1000, 20, 2);
    let (idx, screen) = sis_iboss_select(&d, 100, 5).unwrap();
    assert_eq!(screen.selected_vars.len(), 5);
    let mut buf = Vec::new();
    idx.write_csv(&mut buf).unwrap();
    let back = SubdataIndex::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back.rows, idx.rows);
    assert_eq!(back.provenance, idx.provenance);
}

#[test]
fn methods_run_outside_the_harness() {
    let (d, model) = simulated(3000, 10, 3);
    let settings = MethodSettings::new(300);
    for text in ["FULL", "UNIF", "LEV", "ALEV(5)", "D-OPT", "SIS-IBOSS(5)", "SPC(2/3)"] {
        let m: Method = text.parse().unwrap();
        let seed = method_seed(9, m);
        let a = fit_method(m, &d, &settings, seed).unwrap();
        let b = fit_method(m, &d, &settings, seed).unwrap();
        assert_eq!(a.beta, b.beta, "{text}");
        assert_eq!(a.rows.is_some(), m.selects_rows(), "{text}");
        assert_eq!(a.beta.len(), 11);
        assert!(selection_metrics(&model.beta, &a.beta).unwrap().sensitivity > 0.5, "{text}");
    }
}
