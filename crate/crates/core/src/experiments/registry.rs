use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamInfo {
    pub key: &'static str,
    pub default: &'static str,
    /// Validation rule in words.
    pub rule: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnInfo {
    pub name: &'static str,
    pub meaning: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentInfo {
    pub name: &'static str,
    /// The mathematical statement the experiment exercises.
    pub anchor: &'static str,
    pub params: Vec<ParamInfo>,
    pub columns: Vec<ColumnInfo>,
}

const fn p(key: &'static str, default: &'static str, rule: &'static str) -> ParamInfo {
    ParamInfo { key, default, rule }
}

const fn c(name: &'static str, meaning: &'static str) -> ColumnInfo {
    ColumnInfo { name, meaning }
}

/// All registered experiments.
pub fn list_experiments() -> Vec<ExperimentInfo> {
    vec![
        ExperimentInfo {
            name: "kernel-audit",
            anchor: "Kernel assumptions A1-A3 and lower Matuszewska indices; stable kernels satisfy A2 with C2 = 1/(2^{α/2}-1)",
            params: vec![
                p("d", "1", "dimension >= 1"),
                p("p", "2", "1 < q <= p"),
                p("q", "2", "1 < q <= p"),
                p("diam", "1", "positive diameter, or 0 for an unbounded domain"),
                p("alphas", "0.5,1.0,1.5,1.99", "stable orders in (0, 2)"),
            ],
            columns: vec![
                c("profile", "kernel profile φ"),
                c("a1", "∫(1∧|y|^q)K(0,y)dy"),
                c("c2", "empirical A2 constant"),
                c("c2_expected", "1/(2^{α/2}-1) for stable profiles, empty otherwise"),
                c("c3", "sup φ(2r)/φ(r) on the radius grid"),
                c("a1_pass", "A1 verdict"),
                c("a2_pass", "A2 verdict"),
                c("a3_pass", "A3 verdict"),
                c("lower_index_zero", "lower Matuszewska index at 0"),
                c("lower_index_inf", "lower Matuszewska index at infinity"),
                c("strip_tail", "Σ_n ∫_{|x|>n} K(0,x)dx (infinite when the layer series grows)"),
                c("note", "why a row has no audit"),
            ],
        },
        ExperimentInfo {
            name: "uniform-square-ratio",
            anchor: "Full and truncated seminorms are comparable on uniform domains for kernels satisfying A1-A3",
            params: vec![
                p("alphas", "0.5,1.0,1.5", "stable orders in (0, 2)"),
                p("thetas", "0.25,1", "increasing values in (0, 1]"),
            ],
            columns: vec![
                c("alpha", "stable order"),
                c("function", "test function"),
                c("theta", "truncation parameter"),
                c("full2", "squared full seminorm"),
                c("trunc2", "squared truncated seminorm"),
                c("ratio", "full / truncated"),
                c("ratio_previous", "the ratio at the previous refinement level"),
                c("low_confidence", "tolerance not met or tail unreliable"),
            ],
        },
        ExperimentInfo {
            name: "const-kernel-blowup",
            anchor: "For K ≡ 1 on (0,1) and f = x^{-γ}, the full/truncated ratio blows up as γ → 1/2",
            params: vec![p("gammas", "0.25,0.4,0.49", "increasing values in (0, 1/2)"), p("eps", "0.5", "truncation ε in (0, 1)")],
            columns: vec![
                c("gamma", "power exponent"),
                c("full2_exact", "closed-form squared full seminorm"),
                c("full2_quad", "quadrature of the same"),
                c("trunc2_bound", "closed-form upper bound of the squared truncated seminorm"),
                c("trunc2_quad", "quadrature of the squared truncated seminorm, θ = ε"),
                c("ratio_closed", "sqrt(full2_exact / trunc2_bound), a lower bound for the ratio"),
                c("ratio_quad", "full / truncated by quadrature"),
            ],
        },
        ExperimentInfo {
            name: "hilbert-kernel-blowup",
            anchor: "For K = |x-y|^{-1} on (0,1) and f = n ∧ 1/x, ratio² grows like log n",
            params: vec![p("ns", "16,64,256", "increasing values >= 1"), p("theta", "0.5", "in (0, 1]")],
            columns: vec![
                c("n", "cap of the reciprocal"),
                c("full2", "squared full seminorm"),
                c("trunc2", "squared truncated seminorm"),
                c("ratio2", "full2 / trunc2"),
                c("sub_exact", "n ln n - 2n + ln n + 2"),
                c("sub_quad", "quadrature of the part 1/n < y < x < 1"),
                c("low_confidence", "tolerance not met or tail unreliable"),
            ],
        },
        ExperimentInfo {
            name: "strip-1d",
            anchor: "On R×(0,1) with |x-y|^{-2-α}: comparable for α > 1 (tail condition), ratio² ~ n^{1-α} for α < 1",
            params: vec![
                p("alpha", "1.5", "in (0, 2)"),
                p("ns", "4,8,16,32", "increasing values >= 1"),
                p("theta", "0.5", "in (0, 1]"),
            ],
            columns: vec![
                c("n", "ramp width"),
                c("full2", "squared full seminorm"),
                c("trunc2", "squared truncated seminorm"),
                c("ratio2", "full2 / trunc2"),
                c("full2_cross_section", "2∫A(t)κ(t)dt, an independent route to full2"),
                c("low_confidence", "tolerance not met or tail unreliable"),
            ],
        },
        ExperimentInfo {
            name: "strip-kl",
            anchor: "On R^k×(0,1)^l comparability holds when k-l-α < -1 and fails for k = l = 1, α < 1",
            params: vec![
                p("cases", "1:1:0.5;1:2:0.5;1:1:1.5", "k:l:α groups with k = 1, l in {1, 2}, α in (0, 2)"),
                p("ns", "4,8,32", "increasing values >= 1"),
                p("theta", "0.5", "in (0, 1]"),
            ],
            columns: vec![
                c("k", "unbounded axes"),
                c("l", "bounded axes"),
                c("alpha", "stable order"),
                c("k_l_alpha", "k - l - α"),
                c("n", "ramp width"),
                c("ratio2", "full2 / trunc2"),
                c("observed", "trend of the case's ladder"),
                c("expected", "bounded, growing, or unsettled"),
            ],
        },
        ExperimentInfo {
            name: "zero-order-log",
            anchor: "For φ ≡ 1 the log-corrected truncated seminorm dominates the full one, and F_0 differs from F_log",
            params: vec![
                p("ns", "16,64,256", "increasing values >= 1"),
                p("theta", "0.5", "in (0, 1]"),
                p("fourier_n", "2", "integer >= 2"),
                p("levels", "100,10000", "two increasing level counts"),
                p("ms", "64,256,1024,4096", "frequencies >= 2"),
            ],
            columns: vec![
                c("part", "forward, fourier or cosine"),
                c("index", "n, level count L, or frequency m"),
                c("a", "forward: full2; fourier: Σ|f̂|² ln|m|; cosine: I0(m)/ln m"),
                c("b", "forward: plain ratio2; fourier: Σ|f̂|² ln²|m|; cosine: I_log(m)/ln² m"),
                c("c", "forward: log-corrected ratio2; fourier: next-term increment of the log sum; cosine: I0(m)"),
            ],
        },
        ExperimentInfo {
            name: "whitney-lemmas",
            anchor: "Cube-sum, shadow-sum and chain-sum inequalities over Whitney decompositions have uniform constants",
            params: vec![
                p("depths", "6,8", "increasing depths in 2..=10"),
                p("s", "0.5", "power profile exponent > 0"),
                p("pairs", "200", "sampled shadow pairs >= 1"),
            ],
            columns: vec![
                c("depth", "maximal dyadic depth"),
                c("cubes", "cube count"),
                c("rho", "calibrated shadow radius"),
                c("violations", "Whitney axiom violations"),
                c("sum_all_over", "empirical constant"),
                c("shadow_sum", "empirical constant"),
                c("chain_sum", "empirical constant"),
            ],
        },
    ]
}

pub fn describe(name: &str) -> Result<ExperimentInfo> {
    list_experiments().into_iter().find(|e| e.name == name).ok_or_else(|| Error::UnknownExperiment(name.to_string()))
}
