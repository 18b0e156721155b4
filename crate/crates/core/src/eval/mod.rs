//! LLM-as-judge evaluation: sampling, rubric prompts, score parsing and
//! pairwise significance tests between pipeline stages.

mod compare;
mod rubric;
mod sample;
mod scores;
mod ttest;

pub use compare::{compare_stages, ComparisonReport, PairTest, StageSummary, MEASURES};
pub use rubric::{render_rubric_prompt, RubricTemplate, SCORE_PLACEHOLDER, TEXT_PLACEHOLDER, TOTAL_PLACEHOLDER};
pub use sample::{reservoir_sample, sample_documents};
pub use scores::{
    parse_response, parse_scores, read_jsonl, score_responses, write_jsonl, ParsedResponse, PromptRecord,
    ResponseRecord, ScoreCard, ScoringSummary, MAX_CRITERION_SCORE,
};
pub use ttest::{
    format_p, format_t, ln_gamma, pooled_t_test, regularized_incomplete_beta, student_t_two_sided_p, t_test,
    welch_t_test, TTestResult, TTestVariant,
};
