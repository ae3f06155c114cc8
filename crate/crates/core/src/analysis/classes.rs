use serde::Serialize;

use crate::entropy::{Measure, NormalizedScores};
use crate::gem_io::{assign_class, ClassDef, UNCLASSIFIED};

/// One map's z triple inside a class; the raw material for box plots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberScore {
    pub source: String,
    pub z_alpha: f64,
    pub z_beta: f64,
    pub z_ur: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassScore {
    pub class_id: String,
    pub label: String,
    pub sum_z_alpha: f64,
    pub sum_z_beta: f64,
    pub sum_z_ur: f64,
    pub total: f64,
    pub member_zs: Vec<MemberScore>,
}

impl ClassScore {
    pub fn value(&self, measure: Measure) -> f64 {
        match measure {
            Measure::ZAlpha => self.sum_z_alpha,
            Measure::ZBeta => self.sum_z_beta,
            Measure::ZUr => self.sum_z_ur,
            Measure::Total => self.total,
        }
    }
}

/// Sums each map's z triple into its class. Classes come out in definition
/// order, followed by "unclassified"; classes without members are omitted.
pub fn aggregate_by_class(normalized: &[NormalizedScores], defs: &[ClassDef]) -> Vec<ClassScore> {
    let mut buckets: Vec<Vec<MemberScore>> = vec![Vec::new(); defs.len() + 1];
    for z in normalized {
        let id = assign_class(&z.source, defs);
        let slot = defs.iter().position(|d| d.id == id).unwrap_or(defs.len());
        buckets[slot].push(MemberScore {
            source: z.source.clone(),
            z_alpha: z.z_alpha,
            z_beta: z.z_beta,
            z_ur: z.z_ur,
        });
    }

    let names = defs
        .iter()
        .map(|d| (d.id.clone(), d.label.clone()))
        .chain(std::iter::once((UNCLASSIFIED.to_string(), UNCLASSIFIED.to_string())));
    names
        .zip(buckets)
        .filter(|(_, members)| !members.is_empty())
        .map(|((class_id, label), member_zs)| {
            let sum = |f: fn(&MemberScore) -> f64| member_zs.iter().fold(0.0, |a, m| a + f(m));
            let (a, b, u) = (sum(|m| m.z_alpha), sum(|m| m.z_beta), sum(|m| m.z_ur));
            ClassScore {
                class_id,
                label,
                sum_z_alpha: a,
                sum_z_beta: b,
                sum_z_ur: u,
                total: a + b + u,
                member_zs,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedClass {
    /// Display position, 1-based, ties broken by class id.
    pub position: usize,
    pub class_id: String,
    pub label: String,
    pub score: f64,
    /// Average rank among tied scores; used for correlation.
    pub rank: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankTable {
    pub measure: Measure,
    pub entries: Vec<RankedClass>,
}

/// Orders classes from most to least score under `measure`.
pub fn rank_classes(scores: &[ClassScore], measure: Measure) -> RankTable {
    let mut order: Vec<&ClassScore> = scores.iter().collect();
    order.sort_by(|a, b| {
        b.value(measure)
            .total_cmp(&a.value(measure))
            .then_with(|| a.class_id.cmp(&b.class_id))
    });

    let mut entries: Vec<RankedClass> = order
        .iter()
        .enumerate()
        .map(|(i, c)| RankedClass {
            position: i + 1,
            class_id: c.class_id.clone(),
            label: c.label.clone(),
            score: c.value(measure),
            rank: (i + 1) as f64,
        })
        .collect();
    assign_average_ranks(&mut entries);
    RankTable { measure, entries }
}

fn assign_average_ranks(entries: &mut [RankedClass]) {
    let mut start = 0;
    while start < entries.len() {
        let mut end = start + 1;
        while end < entries.len() && entries[end].score == entries[start].score {
            end += 1;
        }
        // positions start+1 ..= end
        let avg = (start + 1 + end) as f64 / 2.0;
        for e in &mut entries[start..end] {
            e.rank = avg;
        }
        start = end;
    }
}
