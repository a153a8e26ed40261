//! Closed-form bounds on the smallest complete arc, the table of smallest
//! known sizes for q ≤ 9109, and checks of the bands those sizes satisfy.
//!
//! Comparisons of the form `t < a√q − m` are done in integers so that
//! squares such as q = 4096 are decided exactly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use thiserror::Error;

/// The embedded table file.
pub const EMBEDDED_TABLE: &str = include_str!("../data/known_sizes.txt");

/// Environment variable naming a replacement table file.
pub const TABLE_PATH_ENV: &str = "ARCFORGE_TABLE_PATH";

/// Pinned average of the normalized size over 173 ≤ q ≤ 9109.
pub const D_AVER: f64 = 0.95579;

pub const Q_SQUARES: [u32; 5] = [961, 1024, 1369, 1681, 2401];

/// Orders in the 4.5 region beyond 2621.
pub const EXCEPTIONAL_45: [u32; 6] = [2659, 2663, 2683, 2693, 2753, 2801];

pub const T2: [u32; 15] = [
    5119, 5147, 5153, 5209, 5231, 5237, 5261, 5279, 5281, 5303, 5347, 5641, 5843, 6011, 8192,
];

pub const T3: [u32; 3] = [1 << 14, 1 << 15, 1 << 18];

pub const T4: [u32; 12] = [359, 367, 401, 419, 512, 541, 571, 643, 653, 719, 773, 787];

pub const T5: &[u32] = &[
    857, 881, 919, 929, 941, 953, 967, 1019, 1031, 1069, 1097, 1109, 1123, 1151, 1163, 1187, 1201,
    1217, 1231, 1259, 1289, 1301, 1319, 1331, 1361, 1373, 1433, 1447, 1493, 1511, 1523, 1553, 1567,
    1571, 1583, 1597, 1601, 1613, 1627, 1663, 1693, 1697, 1723, 1741, 1759, 1777, 1789, 1823, 1871,
    1873, 1889, 1907, 1973, 1987, 1993, 2003, 2039, 2111, 2113, 2129, 2131, 2141, 2143, 2179, 2197,
    2213, 2237, 2251, 2269, 2287, 2309, 2339, 2341, 2357, 2399, 2411, 2417, 2437, 2467, 2473, 2531,
    2609, 2617, 2621,
];

pub const T6: &[u32] = &[
    2657, 2659, 2663, 2677, 2683, 2699, 2719, 2741, 2797, 2801, 2819, 2833, 2837, 2851, 2857, 2879,
    2897, 2917, 2953, 2957, 2971, 2999, 3011, 3019, 3037, 3041, 3061, 3137, 3181, 3217, 3221, 3259,
    3307, 3329, 3331, 3371, 3373, 3391, 3407, 3449, 3461, 3527, 3541, 3547, 3557, 3581, 3613, 3631,
    3671, 3673, 3677, 3691, 3697, 3701, 3719, 3721, 3761, 3767, 3823, 3833, 3847, 3851, 3877, 3917,
    3923, 3943, 3947, 3989, 4007, 4051, 4079, 4096, 4127, 4129, 4201, 4337, 4339, 4391, 4409, 4451,
    4483, 4507, 4603, 4621, 4673, 4729, 4751, 4793, 4799, 4903, 4931, 4973, 4999, 5023, 5051, 5077,
    5081, 5099, 5101, 5153, 5209, 5231, 5261, 5279, 5281, 5347, 5641, 6011, 8192,
];

/// Rows left out of the statistics: the squares, 857, the exceptional 4.5
/// rows, and sporadic far-below-trend entries.
pub fn default_exclusions() -> Vec<u32> {
    let mut v: Vec<u32> = Q_SQUARES.to_vec();
    v.push(857);
    v.extend(EXCEPTIONAL_45);
    v.extend([601, 661, 729, 841, 9011]);
    v.sort_unstable();
    v
}

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("q = {0} is outside the tabulated range")]
    OutOfRange(u32),
    #[error("table line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("q = {0} appears twice in the table")]
    Duplicate(u32),
    #[error("cannot read table {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableRow {
    pub q: u32,
    pub t2bar: u32,
    pub exact: bool,
    pub table: u8,
    /// A_q as printed, when the file carries it.
    pub published_a: Option<i64>,
    /// B_q as printed, in hundredths.
    pub published_b: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnownTable {
    rows: BTreeMap<u32, TableRow>,
}

impl KnownTable {
    /// Parses `q t2bar exact table [A_q B_q]` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, BoundsError> {
        let mut rows = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: &str| BoundsError::Parse {
                line,
                message: message.to_string(),
            };
            let cols: Vec<&str> = body.split_whitespace().collect();
            if cols.len() != 4 && cols.len() != 6 {
                return Err(err("expected 4 or 6 columns"));
            }
            let num = |s: &str, what: &str| {
                s.parse::<u32>()
                    .map_err(|_| err(&format!("bad {what} '{s}'")))
            };
            let q = num(cols[0], "q")?;
            let t2bar = num(cols[1], "size")?;
            let exact = match cols[2] {
                "0" => false,
                "1" => true,
                _ => return Err(err("exact flag must be 0 or 1")),
            };
            let table = num(cols[3], "table id")?;
            if !(1..=5).contains(&table) {
                return Err(err("table id must be 1 to 5"));
            }
            if q < 2 || t2bar < 3 {
                return Err(err("q must be at least 2 and the size at least 3"));
            }
            let (published_a, published_b) = if cols.len() == 6 {
                let a = match cols[4] {
                    "-" => None,
                    s => Some(s.parse::<i64>().map_err(|_| err("bad A_q"))?),
                };
                let b = parse_hundredths(cols[5]).ok_or_else(|| err("bad B_q"))?;
                (a, Some(b))
            } else {
                (None, None)
            };
            let row = TableRow {
                q,
                t2bar,
                exact,
                table: table as u8,
                published_a,
                published_b,
            };
            if rows.insert(q, row).is_some() {
                return Err(BoundsError::Duplicate(q));
            }
        }
        Ok(KnownTable { rows })
    }

    pub fn embedded() -> &'static KnownTable {
        static TABLE: OnceLock<KnownTable> = OnceLock::new();
        TABLE.get_or_init(|| KnownTable::parse(EMBEDDED_TABLE).expect("embedded table parses"))
    }

    pub fn from_file(path: &Path) -> Result<Self, BoundsError> {
        let text = std::fs::read_to_string(path).map_err(|e| BoundsError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// The table named by `ARCFORGE_TABLE_PATH`, or the embedded one.
    pub fn from_env() -> Result<Self, BoundsError> {
        match std::env::var_os(TABLE_PATH_ENV) {
            Some(path) => Self::from_file(Path::new(&path)),
            None => Ok(Self::embedded().clone()),
        }
    }

    pub fn get(&self, q: u32) -> Option<&TableRow> {
        self.rows.get(&q)
    }

    pub fn rows(&self) -> impl Iterator<Item = &TableRow> {
        self.rows.values()
    }

    pub fn range(&self, lo: u32, hi: u32) -> impl Iterator<Item = &TableRow> {
        self.rows.range(lo..=hi).map(|(_, r)| r)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn min_q(&self) -> Option<u32> {
        self.rows.keys().next().copied()
    }

    pub fn max_q(&self) -> Option<u32> {
        self.rows.keys().next_back().copied()
    }

    /// Replaces the size for `q`; for building perturbed tables.
    pub fn set_t2bar(&mut self, q: u32, t2bar: u32) -> Option<()> {
        self.rows.get_mut(&q).map(|r| r.t2bar = t2bar)
    }
}

/// Smallest known size in the embedded table.
pub fn embedded_t2bar(q: u32) -> Option<u32> {
    KnownTable::embedded().get(q).map(|r| r.t2bar)
}

fn parse_hundredths(s: &str) -> Option<u32> {
    let (whole, frac) = s.split_once('.')?;
    if frac.len() != 2 {
        return None;
    }
    Some(whole.parse::<u32>().ok()? * 100 + frac.parse::<u32>().ok()?)
}

pub fn format_hundredths(b: u32) -> String {
    format!("{}.{:02}", b / 100, b % 100)
}

/// A complete arc in PG(2, p^h) has more points than this.
pub fn lower_bound(q: u32, _p: u32, h: u32) -> f64 {
    let q = q as f64;
    let general = (2.0 * q).sqrt() + 1.0;
    if h <= 3 {
        general.max((3.0 * q).sqrt() + 0.5)
    } else {
        general
    }
}

/// Kim–Vu style estimate `d·√q·ln^c q`.
pub fn kim_vu(q: u32, c: f64, d: f64) -> f64 {
    d * (q as f64).sqrt() * (q as f64).ln().powf(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Multiplier {
    Four,
    FourHalf,
    Five,
}

impl Multiplier {
    pub fn tenths(self) -> u32 {
        match self {
            Multiplier::Four => 40,
            Multiplier::FourHalf => 45,
            Multiplier::Five => 50,
        }
    }

    pub fn value(self) -> f64 {
        self.tenths() as f64 / 10.0
    }
}

impl std::fmt::Display for Multiplier {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Multiplier::Four => "4",
            Multiplier::FourHalf => "4.5",
            Multiplier::Five => "5",
        })
    }
}

/// The multiplier used for the A_q column. 857 is tabulated against 4.
pub fn multiplier_a_q(q: u32) -> Result<Multiplier, BoundsError> {
    if Q_SQUARES.contains(&q) || (2..=841).contains(&q) || q == 857 {
        Ok(Multiplier::Four)
    } else if (853..=2621).contains(&q) || EXCEPTIONAL_45.contains(&q) {
        Ok(Multiplier::FourHalf)
    } else if (2623..=9067).contains(&q) {
        Ok(Multiplier::Five)
    } else {
        Err(BoundsError::OutOfRange(q))
    }
}

fn isqrt(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

/// ⌊(tenths/10)·√q⌋.
pub fn floor_scaled_sqrt(tenths: u32, q: u32) -> u64 {
    isqrt(tenths as u64 * tenths as u64 * q as u64) / 10
}

/// `t < (tenths/10)·√q − m`, or `≤` when `strict` is false, decided exactly.
pub fn below_scaled_sqrt(t: u32, tenths: u32, m: u32, q: u32, strict: bool) -> bool {
    let lhs = 10 * (t as u64 + m as u64);
    let lhs = lhs * lhs;
    let rhs = tenths as u64 * tenths as u64 * q as u64;
    if strict {
        lhs < rhs
    } else {
        lhs <= rhs
    }
}

/// Least b with b/100 ≥ t/√q.
pub fn b_q_hundredths(q: u32, t: u32) -> u32 {
    let target = 10_000 * t as u64 * t as u64;
    let q = q as u64;
    let mut b = isqrt(target / q);
    while b * b * q < target {
        b += 1;
    }
    b as u32
}

/// ⌊a·√q − t⌋.
pub fn a_q_slack(q: u32, t: u32, m: Multiplier) -> i64 {
    floor_scaled_sqrt(m.tenths(), q) as i64 - t as i64
}

/// `t / (√q · ln^c q)`.
pub fn d_q(q: u32, t: u32, c: f64) -> f64 {
    t as f64 / ((q as f64).sqrt() * (q as f64).ln().powf(c))
}

/// Predicted size `D_AVER · √q · ln^0.75 q`.
pub fn t_hat(q: u32) -> f64 {
    D_AVER * (q as f64).sqrt() * (q as f64).ln().powf(0.75)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRecord {
    pub q: u32,
    pub t2bar: u32,
    pub exact: bool,
    pub a_q: Option<Multiplier>,
    pub big_a_q: Option<i64>,
    /// B_q in hundredths.
    pub big_b_q: u32,
    pub d_q075: f64,
    pub t_hat: f64,
    pub delta: f64,
    pub p_q: f64,
}

impl BoundRecord {
    pub fn compute(q: u32, t2bar: u32, exact: bool) -> Self {
        let a_q = multiplier_a_q(q).ok();
        let t_hat = t_hat(q);
        let delta = t2bar as f64 - t_hat;
        BoundRecord {
            q,
            t2bar,
            exact,
            a_q,
            big_a_q: a_q.map(|m| a_q_slack(q, t2bar, m)),
            big_b_q: b_q_hundredths(q, t2bar),
            d_q075: d_q(q, t2bar, 0.75),
            t_hat,
            delta,
            p_q: 100.0 * delta / t2bar as f64,
        }
    }

    pub fn b_q(&self) -> f64 {
        self.big_b_q as f64 / 100.0
    }
}

/// Rows whose recomputed A_q or B_q differ from the printed columns.
pub fn published_mismatches(table: &KnownTable) -> Vec<(u32, &'static str)> {
    let mut out = Vec::new();
    for row in table.rows() {
        let rec = BoundRecord::compute(row.q, row.t2bar, row.exact);
        if let Some(b) = row.published_b {
            if b != rec.big_b_q {
                out.push((row.q, "B_q"));
            }
            if row.published_a != rec.big_a_q {
                out.push((row.q, "A_q"));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub rule: String,
    pub q: u32,
    pub t2bar: u32,
    pub bound: f64,
}

/// `t < a√q − m` (or `≤`) for lo ≤ q ≤ hi and for the listed extra orders.
#[derive(Debug, Clone, Copy)]
pub struct BandFamily {
    pub tenths: u32,
    pub m: u32,
    pub strict: bool,
    pub lo: u32,
    pub hi: u32,
    pub extra: &'static [u32],
}

impl BandFamily {
    pub fn name(&self) -> String {
        let a = if self.tenths.is_multiple_of(10) {
            format!("{}", self.tenths / 10)
        } else {
            format!("{}.{}", self.tenths / 10, self.tenths % 10)
        };
        let rel = if self.strict { "<" } else { "<=" };
        if self.m == 0 {
            format!("t {rel} {a}sqrt(q)")
        } else {
            format!("t {rel} {a}sqrt(q) - {}", self.m)
        }
    }

    pub fn orders<'t>(&self, table: &'t KnownTable) -> impl Iterator<Item = &'t TableRow> + 't {
        let extra = self.extra;
        let (lo, hi) = (self.lo, self.hi);
        table.range(lo, hi).chain(
            extra
                .iter()
                .filter(move |&&q| q < lo || q > hi)
                .filter_map(|&q| table.get(q)),
        )
    }

    pub fn check(&self, table: &KnownTable, out: &mut Vec<Violation>) {
        for row in self.orders(table) {
            if !below_scaled_sqrt(row.t2bar, self.tenths, self.m, row.q, self.strict) {
                out.push(Violation {
                    rule: self.name(),
                    q: row.q,
                    t2bar: row.t2bar,
                    bound: self.tenths as f64 / 10.0 * (row.q as f64).sqrt() - self.m as f64,
                });
            }
        }
    }
}

const fn fam(
    tenths: u32,
    m: u32,
    strict: bool,
    lo: u32,
    hi: u32,
    extra: &'static [u32],
) -> BandFamily {
    BandFamily {
        tenths,
        m,
        strict,
        lo,
        hi,
        extra,
    }
}

/// Every `a√q − m` inequality proved over the table.
pub const THEOREM_FAMILIES: &[BandFamily] = &[
    fam(45, 0, true, 2, 2621, &EXCEPTIONAL_45),
    fam(
        48,
        0,
        true,
        2,
        5399,
        &[5413, 5417, 5419, 5441, 5443, 5471, 5483, 5501, 5521],
    ),
    fam(50, 0, true, 2, 9067, &[]),
    fam(40, 0, true, 2, 841, &[857, 961, 1024, 1369, 1681, 2401]),
    fam(30, 0, false, 2, 89, &[101]),
    fam(35, 0, true, 2, 277, &[]),
    fam(36, 0, true, 2, 349, &[359, 661]),
    fam(37, 0, true, 2, 419, &[601, 661]),
    fam(38, 0, true, 2, 541, &[601, 661]),
    fam(39, 0, true, 2, 673, &[729, 961, 1024]),
    fam(
        40,
        9,
        false,
        37,
        211,
        &[23, 227, 229, 233, 241, 243, 256, 257, 661],
    ),
    fam(40, 8, false, 23, 307, &[317, 343, 601, 661]),
    fam(40, 7, false, 19, 373, &[383, 401, 601, 661]),
    fam(40, 6, false, 9, 433, &[443, 463, 601, 661]),
    fam(
        40,
        5,
        false,
        8,
        499,
        &[509, 512, 521, 523, 529, 541, 601, 661],
    ),
    fam(
        40,
        4,
        false,
        7,
        557,
        &[
            569, 571, 577, 601, 625, 661, 729, 841, 961, 1024, 1369, 1681, 2401,
        ],
    ),
    fam(
        40,
        3,
        true,
        7,
        643,
        &[653, 661, 729, 841, 961, 1024, 1369, 1681, 2401],
    ),
    fam(
        40,
        2,
        false,
        3,
        691,
        &[709, 719, 729, 841, 961, 1024, 1369, 1681, 2401],
    ),
    fam(
        40,
        1,
        true,
        2,
        761,
        &[773, 787, 841, 961, 1024, 1369, 1681, 2401],
    ),
    fam(41, 0, true, 2, 1031, &[1039, 1069, 1369, 1681, 2401]),
    fam(
        42,
        0,
        true,
        2,
        1289,
        &[1297, 1301, 1303, 1319, 1331, 1369, 1681, 2401],
    ),
    fam(43, 0, true, 2, 1627, &[1657, 1663, 1681, 1697, 2401]),
    fam(
        44,
        0,
        true,
        2,
        2053,
        &[2069, 2087, 2089, 2111, 2113, 2129, 2131, 2401],
    ),
    fam(
        45,
        13,
        true,
        853,
        997,
        &[1013, 1019, 1024, 1031, 1039, 1069, 1097, 1369, 1681, 2401],
    ),
    fam(45, 12, true, 853, 1151, &[1163, 1187, 1369, 1681, 2401]),
    fam(
        45,
        11,
        true,
        853,
        1259,
        &[
            1283, 1289, 1297, 1301, 1303, 1331, 1319, 1361, 1369, 1681, 2401,
        ],
    ),
    fam(45, 10, true, 853, 1399, &[1429, 1433, 1447, 1681, 2401]),
    fam(
        45,
        9,
        true,
        853,
        1553,
        &[1567, 1571, 1583, 1601, 1681, 2401],
    ),
    fam(45, 8, true, 853, 1663, &[1681, 1693, 1697, 1709, 2401]),
    fam(45, 7, true, 853, 1789, &[1811, 1823, 2401]),
    fam(45, 6, true, 853, 1873, &[1879, 1889, 1901, 1907, 2401]),
    fam(45, 5, true, 853, 2003, &[2017, 2039, 2401]),
    fam(45, 4, true, 853, 2143, &[2161, 2179, 2401]),
    fam(
        45,
        3,
        true,
        853,
        2237,
        &[2243, 2251, 2267, 2269, 2287, 2309, 2341, 2377, 2401],
    ),
    fam(45, 2, true, 853, 2381, &[2393, 2399, 2401, 2417, 2437]),
    fam(45, 1, true, 853, 2473, &[2503, 2531, 2549]),
    fam(
        46,
        0,
        true,
        2,
        3307,
        &[3319, 3323, 3329, 3331, 3343, 3347, 3371, 3373, 3391],
    ),
    fam(
        47,
        0,
        true,
        2,
        4201,
        &[
            4217, 4219, 4229, 4241, 4243, 4253, 4271, 4273, 4297, 4363, 4423,
        ],
    ),
    fam(
        49,
        0,
        true,
        2,
        6907,
        &[
            6947, 6949, 6961, 6971, 6983, 6997, 7001, 7039, 7187, 7193, 7307, 7451,
        ],
    ),
    // Squares sit exactly on some of these lines, so they are checked with ≤.
    fam(
        50,
        22,
        false,
        2633,
        3559,
        &[
            3581, 3583, 3607, 3613, 3617, 3631, 3643, 3673, 3677, 3697, 3701, 3721, 3739, 3761,
            3847, 3851,
        ],
    ),
    fam(
        50,
        21,
        false,
        2633,
        3767,
        &[
            3779, 3797, 3803, 3821, 3823, 3833, 3847, 3851, 3853, 3877, 3917, 3919, 3923, 3947,
            4021, 4027, 4153,
        ],
    ),
    fam(
        50,
        20,
        false,
        2633,
        4079,
        &[
            4096, 4099, 4127, 4129, 4153, 4159, 4177, 4201, 4229, 4253, 4273, 4363, 4423,
        ],
    ),
    fam(
        50,
        19,
        false,
        2633,
        4297,
        &[
            4337, 4339, 4357, 4363, 4391, 4409, 4423, 4447, 4463, 4481, 4489, 4517,
        ],
    ),
    fam(
        50,
        16,
        false,
        2633,
        5023,
        &[
            5041, 5051, 5059, 5077, 5081, 5099, 5101, 5107, 5113, 5119, 5153, 5189, 5333,
        ],
    ),
    fam(
        50,
        14,
        false,
        2633,
        5501,
        &[
            5507, 5519, 5521, 5527, 5557, 5569, 5573, 5581, 5591, 5689, 5693, 5711, 5717, 5749,
            5783, 5813,
        ],
    ),
    fam(
        50,
        12,
        false,
        2633,
        5881,
        &[
            5903, 5923, 5927, 5939, 5953, 5987, 6007, 6029, 6053, 6073, 6089, 6143, 6151, 6163,
        ],
    ),
];

/// Checks every theorem inequality, including `t < 0.9987·√q·ln^0.75 q`
/// for 23 ≤ q ≤ 9109.
pub fn check_theorem_bands(table: &KnownTable) -> Vec<Violation> {
    let mut out = Vec::new();
    for family in THEOREM_FAMILIES {
        family.check(table, &mut out);
    }
    for row in table.range(23, 9109) {
        let bound = 0.9987 * (row.q as f64).sqrt() * (row.q as f64).ln().powf(0.75);
        if (row.t2bar as f64) >= bound {
            out.push(Violation {
                rule: "t < 0.9987sqrt(q)ln^0.75(q)".into(),
                q: row.q,
                t2bar: row.t2bar,
                bound,
            });
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conjecture {
    /// `t < √q·ln^0.75 q` for q ≥ 23.
    Ln075,
    /// `t < 5√q` for q ≤ 8192.
    FiveSqrt,
}

pub fn check_conjecture(table: &KnownTable, which: Conjecture) -> Vec<Violation> {
    let mut out = Vec::new();
    match which {
        Conjecture::Ln075 => {
            for row in table.range(23, u32::MAX) {
                let bound = (row.q as f64).sqrt() * (row.q as f64).ln().powf(0.75);
                if (row.t2bar as f64) >= bound {
                    out.push(Violation {
                        rule: "t < sqrt(q)ln^0.75(q)".into(),
                        q: row.q,
                        t2bar: row.t2bar,
                        bound,
                    });
                }
            }
        }
        Conjecture::FiveSqrt => fam(50, 0, true, 2, 8192, &[]).check(table, &mut out),
    }
    out
}

/// A q-range with bands for the normalized size and the percentage deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservationBand {
    pub lo: u32,
    pub hi: u32,
    pub d: (f64, f64),
    pub p: (f64, f64),
}

impl ObservationBand {
    /// The first band includes its lower end; the rest are open there.
    pub fn contains(&self, q: u32) -> bool {
        let above = if self.lo == 173 {
            q >= self.lo
        } else {
            q > self.lo
        };
        above && q < self.hi
    }
}

pub const OBSERVATION_BANDS: [ObservationBand; 9] = [
    ObservationBand {
        lo: 173,
        hi: 1000,
        d: (0.946, 0.9634),
        p: (-0.94, 0.79),
    },
    ObservationBand {
        lo: 1000,
        hi: 2000,
        d: (0.953, 0.9605),
        p: (-0.28, 0.49),
    },
    ObservationBand {
        lo: 2000,
        hi: 3000,
        d: (0.950, 0.9595),
        p: (-0.52, 0.38),
    },
    ObservationBand {
        lo: 3000,
        hi: 4000,
        d: (0.950, 0.9588),
        p: (-0.57, 0.32),
    },
    ObservationBand {
        lo: 4000,
        hi: 5000,
        d: (0.951, 0.9584),
        p: (-0.48, 0.27),
    },
    ObservationBand {
        lo: 5000,
        hi: 6000,
        d: (0.950, 0.9579),
        p: (-0.59, 0.22),
    },
    ObservationBand {
        lo: 6000,
        hi: 7000,
        d: (0.951, 0.9577),
        p: (-0.46, 0.20),
    },
    ObservationBand {
        lo: 7000,
        hi: 8000,
        d: (0.947, 0.9573),
        p: (-0.88, 0.16),
    },
    ObservationBand {
        lo: 8000,
        hi: 9110,
        d: (0.949, 0.9573),
        p: (-0.66, 0.16),
    },
];

pub const DELTA_BAND: (f64, f64) = (-3.70, 0.81);

pub const STATS_Q_MIN: u32 = 173;

fn statistic_rows<'t>(
    table: &'t KnownTable,
    q_min: u32,
    exclusions: &'t [u32],
) -> impl Iterator<Item = &'t TableRow> + 't {
    table
        .range(q_min, u32::MAX)
        .filter(move |r| !exclusions.contains(&r.q))
}

/// Rows that leave their normalized-size, deviation or percentage band.
pub fn check_observations(table: &KnownTable, exclusions: &[u32]) -> Vec<Violation> {
    let mut out = Vec::new();
    let inside = |x: f64, (lo, hi): (f64, f64)| lo < x && x < hi;
    for row in statistic_rows(table, STATS_Q_MIN, exclusions) {
        let rec = BoundRecord::compute(row.q, row.t2bar, row.exact);
        let mut flag = |rule: String, bound: f64| {
            out.push(Violation {
                rule,
                q: row.q,
                t2bar: row.t2bar,
                bound,
            })
        };
        if !inside(rec.delta, DELTA_BAND) {
            flag(format!("delta in {:?}", DELTA_BAND), rec.delta);
        }
        for band in OBSERVATION_BANDS.iter().filter(|b| b.contains(row.q)) {
            if !inside(rec.d_q075, band.d) {
                flag(format!("D in {:?}", band.d), rec.d_q075);
            }
            if !inside(rec.p_q, band.p) {
                flag(format!("P in {:?}", band.p), rec.p_q);
            }
        }
    }
    out
}

/// Mean of `d_q(q, t, c)` over the included rows with q ≥ `q_min`.
pub fn average_d(table: &KnownTable, c: f64, q_min: u32, exclusions: &[u32]) -> Option<f64> {
    let (sum, n) = statistic_rows(table, q_min, exclusions)
        .fold((0.0, 0usize), |(s, n), r| (s + d_q(r.q, r.t2bar, c), n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Formats a real with six significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.5}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub const STATS_HEADER: &str = "q,t2bar,A_q,B_q,D_q,t_hat,delta,P_q";

/// CSV of per-q statistics, `D_q` taken with exponent `c`.
pub fn emit_stats_csv(table: &KnownTable, c: f64, q_min: u32, exclusions: &[u32]) -> String {
    let mut s = String::from(STATS_HEADER);
    s.push('\n');
    for row in statistic_rows(table, q_min, exclusions) {
        let rec = BoundRecord::compute(row.q, row.t2bar, row.exact);
        let a = rec.big_a_q.map(|a| a.to_string()).unwrap_or_default();
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            row.q,
            row.t2bar,
            a,
            format_hundredths(rec.big_b_q),
            sig6(d_q(row.q, row.t2bar, c)),
            sig6(rec.t_hat),
            sig6(rec.delta),
            sig6(rec.p_q),
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_examples() {
        assert!((lower_bound(9, 3, 2) - (27f64.sqrt() + 0.5)).abs() < 1e-12);
        assert!((lower_bound(9, 3, 2) - 5.696).abs() < 1e-3);
        assert_eq!(lower_bound(2, 2, 1), 3.0f64.max(6f64.sqrt() + 0.5));
        assert!((lower_bound(16, 2, 4) - 6.657).abs() < 1e-3);
    }

    #[test]
    fn multiplier_examples() {
        assert_eq!(multiplier_a_q(841), Ok(Multiplier::Four));
        assert_eq!(multiplier_a_q(857), Ok(Multiplier::Four));
        assert_eq!(multiplier_a_q(1024), Ok(Multiplier::Four));
        assert_eq!(multiplier_a_q(1201), Ok(Multiplier::FourHalf));
        assert_eq!(multiplier_a_q(2693), Ok(Multiplier::FourHalf));
        assert_eq!(multiplier_a_q(2689), Ok(Multiplier::Five));
        assert_eq!(multiplier_a_q(9067), Ok(Multiplier::Five));
        assert_eq!(multiplier_a_q(9091), Err(BoundsError::OutOfRange(9091)));
        assert_eq!(multiplier_a_q(1), Err(BoundsError::OutOfRange(1)));
    }

    #[test]
    fn record_examples() {
        let r = BoundRecord::compute(857, 117, false);
        assert_eq!((r.big_a_q, r.big_b_q), (Some(0), 400));
        let r = BoundRecord::compute(2, 4, true);
        assert_eq!((r.big_a_q, r.big_b_q), (Some(1), 283));
        let d = 117.0 / (857f64.sqrt() * 857f64.ln().powf(0.75));
        assert_eq!(BoundRecord::compute(857, 117, false).d_q075, d);
        assert!(0.946 < d && d < 0.9634);
        assert_eq!(BoundRecord::compute(9091, 477, false).big_a_q, None);
    }

    #[test]
    fn exact_comparisons_agree_with_floats_off_the_boundary() {
        for q in 2..3000u32 {
            for t in [3u32, 10, 50, 100, 200] {
                let b = b_q_hundredths(q, t);
                let ratio = t as f64 / (q as f64).sqrt();
                assert!(b as f64 / 100.0 >= ratio - 1e-12);
                assert!((b - 1) as f64 / 100.0 < ratio);
                let exact = floor_scaled_sqrt(45, q);
                assert_eq!(exact, (4.5 * (q as f64).sqrt()).floor() as u64, "q={q}");
            }
        }
        assert!(below_scaled_sqrt(300, 50, 20, 4096, false));
        assert!(!below_scaled_sqrt(300, 50, 20, 4096, true));
    }

    #[test]
    fn parse_rejects_bad_tables() {
        assert!(matches!(
            KnownTable::parse("2 4 1"),
            Err(BoundsError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            KnownTable::parse("# c\n2 4 2 1"),
            Err(BoundsError::Parse { line: 2, .. })
        ));
        assert_eq!(
            KnownTable::parse("2 4 1 1\n2 4 1 1"),
            Err(BoundsError::Duplicate(2))
        );
        let t = KnownTable::parse("3 4 1 1 # trailing\n2 4 1 1 1 2.83\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.get(2).unwrap().published_b, Some(283));
        assert_eq!(t.min_q(), Some(2));
    }

    #[test]
    fn embedded_table_shape() {
        let t = KnownTable::embedded();
        assert_eq!(t.len(), 1180);
        assert_eq!(t.max_q(), Some(9109));
        assert_eq!(embedded_t2bar(857), Some(117));
        assert_eq!(embedded_t2bar(9067), Some(476));
        assert_eq!(embedded_t2bar(6), None);
        assert_eq!(t.range(8363, 9109).count(), 84);
        let exact: Vec<u32> = t.rows().filter(|r| r.exact).map(|r| r.q).collect();
        assert_eq!(
            exact,
            [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32]
        );
    }

    #[test]
    fn sig6_formatting() {
        assert_eq!(sig6(0.955806), "0.955806");
        assert_eq!(sig6(117.0), "117.000");
        assert_eq!(sig6(-3.1234567), "-3.12346");
        assert_eq!(sig6(-0.0123456789), "-0.0123457");
        assert_eq!(sig6(123456.7), "123457");
    }

    #[test]
    fn kim_vu_evaluates_formula() {
        assert!((kim_vu(100, 1.0, 2.0) - 20.0 * 100f64.ln()).abs() < 1e-12);
    }
}
