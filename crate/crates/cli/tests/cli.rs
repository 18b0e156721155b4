use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use twcurate::corpus_io::{read_documents_jsonl, Document};
use twcurate::eval::{write_jsonl, ResponseRecord};
use twcurate::quality::{gopher_filter, QualityConfig};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn twcurate(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twcurate"))
        .args(args)
        .env_remove("TWCURATE_OUTPUT_DIR")
        .env_remove("TWCURATE_WORKER_COUNT")
        .output()
        .unwrap()
}

fn ok(out: &Output) {
    assert!(
        out.status.success(),
        "status {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_docs(p: &Path) -> Vec<Document> {
    read_documents_jsonl(BufReader::new(File::open(p).unwrap()))
        .map(Result::unwrap)
        .collect()
}

fn survivors(dir: &Path) -> BTreeMap<String, String> {
    let mut all = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.file_name().unwrap().to_str().unwrap().starts_with("part-") {
            for d in read_docs(&p) {
                all.insert(d.id.clone(), d.text().to_string());
            }
        }
    }
    all
}

#[test]
fn run_on_fixture_writes_shards_and_stats() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let conf = fixtures().join("golden.conf");
    let res = twcurate(&["run", "--config", s(&conf), "--output", s(&out), "--workers", "2"]);
    ok(&res);
    assert!(out.join("stats.json").is_file());
    assert!(out.join("stats.txt").is_file());
    assert!(out.join("part-00000.jsonl").is_file());
    assert!(out.join("part-00001.jsonl").is_file());
    assert!(!out.join("stages").exists());
    let golden = std::fs::read_to_string(fixtures().join("golden_stats.json")).unwrap();
    assert_eq!(std::fs::read_to_string(out.join("stats.json")).unwrap(), golden);
    assert!(String::from_utf8_lossy(&res.stdout).contains("global kept rate"));
}

#[test]
fn run_with_flags_only() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let warc = fixtures().join("golden.warc.gz");
    ok(&twcurate(&[
        "run",
        "--input",
        s(&warc),
        "--output",
        s(&out),
        "--shard-count",
        "3",
    ]));
    assert!(out.join("part-00002.jsonl").is_file());
}

#[test]
fn missing_blocklist_is_config_error_without_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let warc = fixtures().join("golden.warc.gz");
    let missing = tmp.path().join("no-such-blocklist.txt");
    let res = twcurate(&[
        "run",
        "--input",
        s(&warc),
        "--output",
        s(&out),
        "--blocklist",
        s(&missing),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn bad_flag_value_is_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let res = twcurate(&["run", "--output", s(&out), "--set", "min_words=lots"]);
    assert_eq!(res.status.code(), Some(1));
    let res = twcurate(&["run", "--output", s(&out), "--workers", "0"]);
    assert_eq!(res.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn env_supplies_output_dir() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("from-env");
    let warc = fixtures().join("golden.warc.gz");
    let res = Command::new(env!("CARGO_BIN_EXE_twcurate"))
        .args(["run", "--input", s(&warc)])
        .env("TWCURATE_OUTPUT_DIR", &out)
        .env("TWCURATE_WORKER_COUNT", "1")
        .output()
        .unwrap();
    ok(&res);
    assert!(out.join("stats.json").is_file());
}

#[test]
fn unwritable_output_is_runtime_failure() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let out = blocker.join("out");
    let warc = fixtures().join("golden.warc.gz");
    let res = twcurate(&["run", "--input", s(&warc), "--output", s(&out)]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("partial output"));
}

fn chain(tmp: &Path, conf: &Path, upto: &str) -> PathBuf {
    let mut input = fixtures().join("golden.warc.gz");
    for (i, name) in [
        "prefilter",
        "extract",
        "langid",
        "gopher",
        "c4",
        "fineweb",
        "minhash",
        "trim",
    ]
    .iter()
    .enumerate()
    {
        let out = tmp.join(format!("{i}-{name}.jsonl"));
        ok(&twcurate(&[
            "stage",
            name,
            "--in",
            s(&input),
            "--out",
            s(&out),
            "--config",
            s(conf),
        ]));
        input = out;
        if *name == upto {
            break;
        }
    }
    input
}

#[test]
fn stage_gopher_keeps_exactly_the_direct_keeps() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = fixtures().join("golden.conf");
    let langid = chain(tmp.path(), &conf, "langid");
    let out = tmp.path().join("gopher.jsonl");
    ok(&twcurate(&["stage", "gopher", "--in", s(&langid), "--out", s(&out)]));

    let cfg = QualityConfig::default();
    let expected: Vec<Document> = read_docs(&langid)
        .into_iter()
        .filter(|d| gopher_filter(d, &cfg).keep)
        .collect();
    let got = read_docs(&out);
    assert!(!got.is_empty() && got.len() < read_docs(&langid).len());
    assert_eq!(got, expected);
}

#[test]
fn chained_stages_match_full_run() {
    let tmp = tempfile::tempdir().unwrap();
    let conf = fixtures().join("golden.conf");
    let last = chain(tmp.path(), &conf, "trim");
    let chained: BTreeMap<String, String> = read_docs(&last)
        .into_iter()
        .map(|d| (d.id.clone(), d.text().to_string()))
        .collect();

    let out = tmp.path().join("run");
    ok(&twcurate(&["run", "--config", s(&conf), "--output", s(&out)]));
    let full = survivors(&out);
    assert_eq!(full.len(), 12);
    assert_eq!(chained, full);
}

#[test]
fn unknown_stage_is_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let res = twcurate(&["stage", "bogus", "--in", "x", "--out", s(&tmp.path().join("y"))]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn stats_renders_report() {
    let res = twcurate(&["stats", s(&fixtures().join("golden_stats.json"))]);
    ok(&res);
    let text = String::from_utf8_lossy(&res.stdout);
    for stage in ["prefilter", "langid", "gopher", "minhash", "trim"] {
        assert!(text.contains(stage), "{text}");
    }
    assert!(text.contains("global kept rate"));
}

#[test]
fn config_prints_parsable_defaults() {
    let res = twcurate(&["config"]);
    ok(&res);
    let tmp = tempfile::tempdir().unwrap();
    let p = tmp.path().join("d.conf");
    std::fs::write(&p, &res.stdout).unwrap();
    let cfg = twcurate::pipeline::PipelineConfig::from_file(&p).unwrap();
    assert_eq!(cfg.line_trim_threshold, 100);
    assert_eq!(cfg.language_threshold, 0.65);
}

#[test]
fn sample_prompts_compare_flow() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("run");
    let conf = fixtures().join("golden.conf");
    ok(&twcurate(&["run", "--config", s(&conf), "--output", s(&out)]));

    let sample = tmp.path().join("sample.jsonl");
    let p0 = out.join("part-00000.jsonl");
    let p1 = out.join("part-00001.jsonl");
    ok(&twcurate(&[
        "sample",
        "--in",
        s(&p0),
        s(&p1),
        "-n",
        "5",
        "--seed",
        "7",
        "--out",
        s(&sample),
    ]));
    let sampled = read_docs(&sample);
    assert_eq!(sampled.len(), 5);

    let prompts = tmp.path().join("prompts.jsonl");
    ok(&twcurate(&["prompts", "--in", s(&sample), "--out", s(&prompts)]));
    let text = std::fs::read_to_string(&prompts).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains(&sampled[0].id));

    let mut files = Vec::new();
    for (stage, base) in [("early", 1u8), ("late", 3u8)] {
        let records: Vec<ResponseRecord> = (0..6u8)
            .map(|i| ResponseRecord {
                doc_id: format!("{stage}-{i}"),
                response: format!(
                    "1. 繁體中文與語言自然性：{}\n2. 教育價值：{}\n3. 敏感內容：5\n總分：{}",
                    base + i % 2,
                    base,
                    2 * base + i % 2 + 5
                ),
            })
            .collect();
        let p = tmp.path().join(format!("{stage}.jsonl"));
        write_jsonl(&records, File::create(&p).unwrap()).unwrap();
        files.push(format!("{stage}={}", p.display()));
    }
    let report = tmp.path().join("report.json");
    let res = twcurate(&[
        "compare",
        "--responses",
        &files[0],
        "--responses",
        &files[1],
        "--out",
        s(&report),
    ]);
    ok(&res);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["stages"]["early"]["n"], 6);
    assert_eq!(json["pairs"].as_array().unwrap().len(), 4);
}
