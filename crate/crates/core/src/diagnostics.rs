//! Structural checks for member matrices with six rows.
//!
//! For a member matrix of `K_6 □ K_q` with `|C| = 2q + s` colours and
//! `1 ≤ s ≤ 7`, a family of inequalities on frequency classes and row
//! statistics must hold. [`claim_suite`] evaluates each of them with witness
//! values. A failing entry on a genuine member matrix means a bug here, not a
//! counterexample.
//!
//! The auxiliary graph has the `p` rows as vertices, with `{i, k}` an edge iff
//! some 2-colour occurs in both rows (`r(i, k) ≥ 1`).

use serde::Serialize;
use thiserror::Error;

use crate::bounds::matrix_excess;
use crate::matrix::ColourMatrix;
use crate::stats::{FreqClass, Stats};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagnosticsError {
    #[error("claim suite needs exactly 6 rows, got {0}")]
    RowCount(usize),
    #[error("claim suite needs q >= 7, got {0}")]
    SmallQ(usize),
    #[error("surplus s = |C| - 2q = {0} is outside [1, 7]")]
    Surplus(i64),
    #[error("matrix is not a proper complete colouring")]
    NotMember,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Isolated,
    Path,
    Cycle,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    /// 1-based row numbers, ascending.
    pub rows: Vec<usize>,
    pub kind: ComponentKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AuxEdge {
    /// 1-based, `a < b`.
    pub a: usize,
    pub b: usize,
    /// `r(a, b)`.
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuxGraph {
    pub order: usize,
    pub edges: Vec<AuxEdge>,
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub components: Vec<Component>,
    #[serde(skip)]
    weights: Vec<Vec<usize>>,
}

impl AuxGraph {
    /// `r(i, k)` for 0-based rows; zero on the diagonal.
    pub fn weight(&self, i: usize, k: usize) -> usize {
        self.weights[i][k]
    }

    pub fn has_edge(&self, i: usize, k: usize) -> bool {
        i != k && self.weights[i][k] >= 1
    }

    pub fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.order).filter(move |&k| self.has_edge(i, k))
    }
}

pub fn build_aux_graph(m: &ColourMatrix) -> AuxGraph {
    build_aux_graph_from(&Stats::new(m), m.rows())
}

fn build_aux_graph_from(stats: &Stats, p: usize) -> AuxGraph {
    let mut weights = vec![vec![0usize; p]; p];
    let mut edges = Vec::new();
    for i in 0..p {
        for k in i + 1..p {
            let w = stats.lines.r(&[i, k]).expect("distinct in-range rows");
            weights[i][k] = w;
            weights[k][i] = w;
            if w >= 1 {
                edges.push(AuxEdge {
                    a: i + 1,
                    b: k + 1,
                    weight: w,
                });
            }
        }
    }
    let degrees: Vec<usize> = (0..p)
        .map(|i| (0..p).filter(|&k| k != i && weights[i][k] >= 1).count())
        .collect();
    let max_degree = degrees.iter().copied().max().unwrap_or(0);

    let mut seen = vec![false; p];
    let mut components = Vec::new();
    for start in 0..p {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut rows = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            rows.push(v);
            for w in 0..p {
                if w != v && weights[v][w] >= 1 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        rows.sort_unstable();
        let n = rows.len();
        let edge_count: usize = rows.iter().map(|&v| degrees[v]).sum::<usize>() / 2;
        let max_deg = rows.iter().map(|&v| degrees[v]).max().unwrap_or(0);
        let kind = if n == 1 {
            ComponentKind::Isolated
        } else if max_deg <= 2 && edge_count == n - 1 {
            ComponentKind::Path
        } else if n >= 3 && edge_count == n && rows.iter().all(|&v| degrees[v] == 2) {
            ComponentKind::Cycle
        } else {
            ComponentKind::Other
        };
        components.push(Component {
            rows: rows.into_iter().map(|v| v + 1).collect(),
            kind,
        });
    }

    AuxGraph {
        order: p,
        edges,
        degrees,
        max_degree,
        components,
        weights,
    }
}

/// Column count and surplus `s = |C| − 2q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurplusContext {
    pub q: usize,
    pub s: i64,
}

impl SurplusContext {
    pub fn of(m: &ColourMatrix) -> Self {
        SurplusContext {
            q: m.cols(),
            s: m.colour_count() as i64 - 2 * m.cols() as i64,
        }
    }

    pub fn is_applicable(&self, p: usize) -> bool {
        p == 6 && self.q >= 7 && (1..=7).contains(&self.s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WitnessValue {
    Int(i64),
    Rows(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub name: String,
    pub value: WitnessValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClaimEntry {
    pub id: &'static str,
    pub statement: &'static str,
    pub applicable: bool,
    /// `None` when the premise does not occur in this matrix.
    pub holds: Option<bool>,
    /// The premise that failed, for inapplicable entries.
    pub precondition: Option<String>,
    pub witnesses: Vec<Witness>,
}

impl ClaimEntry {
    fn new(id: &'static str, statement: &'static str) -> Self {
        ClaimEntry {
            id,
            statement,
            applicable: true,
            holds: None,
            precondition: None,
            witnesses: Vec::new(),
        }
    }

    fn int(mut self, name: &str, v: impl TryInto<i64>) -> Self {
        let v = v.try_into().unwrap_or(i64::MAX);
        self.witnesses.push(Witness {
            name: name.to_string(),
            value: WitnessValue::Int(v),
        });
        self
    }

    fn rows(mut self, name: &str, rows: &[usize]) -> Self {
        self.witnesses.push(Witness {
            name: name.to_string(),
            value: WitnessValue::Rows(rows.iter().map(|r| r + 1).collect()),
        });
        self
    }

    fn verdict(mut self, holds: bool) -> Self {
        self.holds = Some(holds);
        self
    }

    fn not_applicable(mut self, why: impl Into<String>) -> Self {
        self.applicable = false;
        self.holds = None;
        self.precondition = Some(why.into());
        self
    }

    /// Applicable and violated.
    pub fn fails(&self) -> bool {
        self.holds == Some(false)
    }

    pub fn witness(&self, name: &str) -> Option<&WitnessValue> {
        self.witnesses.iter().find(|w| w.name == name).map(|w| &w.value)
    }

    pub fn witness_int(&self, name: &str) -> Option<i64> {
        match self.witness(name)? {
            WitnessValue::Int(v) => Some(*v),
            WitnessValue::Rows(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagnosticsReport {
    pub context: SurplusContext,
    pub aux_graph: AuxGraph,
    pub claims: Vec<ClaimEntry>,
}

impl DiagnosticsReport {
    pub fn all_hold(&self) -> bool {
        self.claims.iter().all(|c| !c.fails())
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimEntry> {
        self.claims.iter().find(|c| c.id == id)
    }
}

fn subsets_of(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == size {
            out.push((0..n).filter(|t| mask >> t & 1 == 1).map(|t| items[t]).collect());
        }
    }
    out
}

/// Evaluates every structural claim on a six-row member matrix with surplus
/// `s ∈ [1, 7]`. Claims come back in a fixed order.
pub fn claim_suite(m: &ColourMatrix) -> Result<DiagnosticsReport, DiagnosticsError> {
    if m.rows() != 6 {
        return Err(DiagnosticsError::RowCount(m.rows()));
    }
    if m.cols() < 7 {
        return Err(DiagnosticsError::SmallQ(m.cols()));
    }
    let ctx = SurplusContext::of(m);
    if !(1..=7).contains(&ctx.s) {
        return Err(DiagnosticsError::Surplus(ctx.s));
    }
    if !m.is_member() {
        return Err(DiagnosticsError::NotMember);
    }

    let stats = Stats::new(m);
    let graph = build_aux_graph_from(&stats, 6);
    let f = &stats.freq;
    let lines = &stats.lines;
    let q = m.cols() as i64;
    let s = ctx.s;
    let c = |l: usize| f.class_size(l) as i64;
    let c_plus = |l: usize| f.class_size_at_least(l) as i64;
    let rows: Vec<usize> = (0..6).collect();
    let pairs: Vec<(usize, usize)> = (0..6)
        .flat_map(|i| (i + 1..6).map(move |k| (i, k)))
        .collect();

    let mut claims = Vec::new();

    claims.push(
        ClaimEntry::new("no-singleton-colours", "c_1 = 0")
            .int("c_1", c(1))
            .verdict(c(1) == 0),
    );
    claims.push(
        ClaimEntry::new("frequency-at-most-six", "c_l = 0 for l >= 7")
            .int("c_7+", c_plus(7))
            .verdict(c_plus(7) == 0),
    );
    claims.push(
        ClaimEntry::new("two-colours-lower", "c_2 >= 3s")
            .int("c_2", c(2))
            .int("3s", 3 * s)
            .verdict(c(2) >= 3 * s),
    );
    claims.push(
        ClaimEntry::new("three-plus-upper", "c_3+ <= 2q - 2s")
            .int("c_3+", c_plus(3))
            .int("2q-2s", 2 * q - 2 * s)
            .verdict(c_plus(3) <= 2 * q - 2 * s),
    );
    let weighted: i64 = (3..=6).map(|i| i as i64 * c(i)).sum();
    claims.push(
        ClaimEntry::new("weighted-three-plus-upper", "sum_{i=3..6} i*c_i <= 6q - 6s")
            .int("sum", weighted)
            .int("6q-6s", 6 * q - 6 * s)
            .verdict(weighted <= 6 * q - 6 * s),
    );
    let frq = f.min_frequency() as i64;
    claims.push(
        ClaimEntry::new("min-frequency-two", "frq(M) = 2")
            .int("frq(M)", frq)
            .verdict(frq == 2),
    );
    let exc = matrix_excess(m).matrix_excess;
    claims.push(
        ClaimEntry::new("excess-seven-minus-s", "exc(M) = 7 - s")
            .int("exc(M)", exc)
            .int("7-s", 7 - s)
            .verdict(exc == 7 - s),
    );
    claims.push(
        ClaimEntry::new("four-plus-upper", "c_4+ <= c_2 - 3s")
            .int("c_4+", c_plus(4))
            .int("c_2-3s", c(2) - 3 * s)
            .verdict(c_plus(4) <= c(2) - 3 * s),
    );
    let (max_pair, max_r) = pairs
        .iter()
        .map(|&(i, k)| ((i, k), graph.weight(i, k)))
        .max_by_key(|&((i, k), w)| (w, std::cmp::Reverse((i, k))))
        .expect("six rows");
    claims.push(
        ClaimEntry::new("pair-two-colours-upper", "r(i,k) <= 8 - s for all row pairs")
            .int("max r(i,k)", max_r)
            .rows("argmax", &[max_pair.0, max_pair.1])
            .int("8-s", 8 - s)
            .verdict(max_r as i64 <= 8 - s),
    );

    // r(i,k) + r_3+(i,k) <= 8 - s on every edge of the auxiliary graph.
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .copied()
        .filter(|&(i, k)| graph.has_edge(i, k))
        .collect();
    let entry = ClaimEntry::new("pair-excess", "r(i,k) >= 1 implies r(i,k) + r_3+(i,k) <= 8 - s");
    claims.push(if edges.is_empty() {
        entry.not_applicable("no row pair with r(i,k) >= 1")
    } else {
        let mut worst = (0i64, edges[0]);
        for &(i, k) in &edges {
            let v = (graph.weight(i, k) + lines.r_3plus(i, k).expect("valid rows")) as i64;
            if v > worst.0 {
                worst = (v, (i, k));
            }
        }
        entry
            .int("pairs checked", edges.len())
            .int("max r+r_3+", worst.0)
            .rows("argmax", &[worst.1 .0, worst.1 .1])
            .int("8-s", 8 - s)
            .verdict(worst.0 <= 8 - s)
    });

    let entry = ClaimEntry::new(
        "star-upper",
        "r(i,k) >= 1, B disjoint from {i,k}, 3 <= |B| <= 4 implies r(B) <= r*(B) <= 2|B|",
    );
    claims.push(if edges.is_empty() {
        entry.not_applicable("no row pair with r(i,k) >= 1")
    } else {
        let mut checked = 0i64;
        let mut min_slack = i64::MAX;
        let mut failure: Option<Vec<usize>> = None;
        for &(i, k) in &edges {
            let rest: Vec<usize> = rows.iter().copied().filter(|&x| x != i && x != k).collect();
            for size in 3..=4 {
                for b in subsets_of(&rest, size) {
                    checked += 1;
                    let r_b = lines.r(&b).expect("valid rows") as i64;
                    let r_star = lines.r_star(&b).expect("3 <= |B| <= p - 2") as i64;
                    let slack = 2 * size as i64 - r_star;
                    min_slack = min_slack.min(slack);
                    if (r_b > r_star || slack < 0) && failure.is_none() {
                        let mut w = vec![i, k];
                        w.extend(&b);
                        failure = Some(w);
                    }
                }
            }
        }
        let e = entry
            .int("combinations checked", checked)
            .int("min 2|B| - r*(B)", min_slack);
        match failure {
            Some(w) => e.rows("violating i,k,B", &w).verdict(false),
            None => e.verdict(true),
        }
    });

    let triples = subsets_of(&rows, 3);
    let premises: Vec<&Vec<usize>> = triples
        .iter()
        .filter(|t| lines.r(t).expect("valid rows") >= 1)
        .collect();
    let entry = ClaimEntry::new(
        "triple-complement-upper",
        "r(i,j,k) >= 1 implies r(l,m,n) <= 9 for the complementary triple",
    );
    claims.push(if premises.is_empty() {
        entry.not_applicable("no row triple with r(i,j,k) >= 1")
    } else {
        let mut worst = (i64::MIN, Vec::new());
        for t in &premises {
            let comp: Vec<usize> = rows.iter().copied().filter(|x| !t.contains(x)).collect();
            let v = lines.r(&comp).expect("valid rows") as i64;
            if v > worst.0 {
                worst = (v, comp);
            }
        }
        entry
            .int("triples checked", premises.len())
            .int("max complementary r", worst.0)
            .rows("argmax", &worst.1)
            .verdict(worst.0 <= 9)
    });

    let delta = graph.max_degree as i64;
    let entry = ClaimEntry::new("max-degree-four", "Delta(G) >= 4 implies q <= 40 - 5s").int("Delta(G)", delta);
    claims.push(if delta < 4 {
        entry.not_applicable(format!("Delta(G) = {delta} < 4"))
    } else {
        entry.int("q", q).int("40-5s", 40 - 5 * s).verdict(q <= 40 - 5 * s)
    });

    let entry = ClaimEntry::new(
        "max-degree-three",
        "Delta(G) = 3 with l adjacent to i,j,k implies r(l,m,n) >= q + 3s - 24",
    )
    .int("Delta(G)", delta);
    claims.push(if delta != 3 {
        entry.not_applicable(format!("Delta(G) = {delta} != 3"))
    } else {
        let bound = q + 3 * s - 24;
        let mut worst = (i64::MAX, Vec::new());
        let mut checked = 0i64;
        for l in 0..6 {
            if graph.degrees[l] != 3 {
                continue;
            }
            checked += 1;
            let others: Vec<usize> = rows
                .iter()
                .copied()
                .filter(|&x| x != l && !graph.has_edge(l, x))
                .collect();
            let triple = [l, others[0], others[1]];
            let v = lines.r(&triple).expect("valid rows") as i64;
            if v < worst.0 {
                worst = (v, triple.to_vec());
            }
        }
        entry
            .int("vertices checked", checked)
            .int("min r(l,m,n)", worst.0)
            .rows("argmin", &worst.1)
            .int("q+3s-24", bound)
            .verdict(worst.0 >= bound)
    });

    Ok(DiagnosticsReport {
        context: ctx,
        aux_graph: graph,
        claims,
    })
}

/// Total `r_2(i)` over the rows equals `2 c_2` in a proper matrix; handy for
/// sanity checks on the graph.
pub fn two_colour_row_total(m: &ColourMatrix) -> usize {
    let stats = Stats::new(m);
    (0..m.rows())
        .map(|i| stats.lines.r_class(i, FreqClass::Exactly(2)))
        .sum()
}
