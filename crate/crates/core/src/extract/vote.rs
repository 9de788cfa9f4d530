use std::collections::BTreeMap;

/// One indicator's output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vote<V> {
    pub value: V,
    /// Position of the producing indicator in its set (seed = 0).
    pub rank: usize,
    /// Dependency distance behind the value; 0 where not applicable.
    pub distance: usize,
}

/// Most frequent value among `votes`, or `None` when there are none.
///
/// Ties go to the value produced by the earliest indicator, then to the one
/// backed by the smallest dependency distance, then to the smallest value.
pub fn majority_vote<V: Clone + Ord>(votes: &[Vote<V>]) -> Option<V> {
    // value -> (count, best rank, best distance)
    let mut tally: BTreeMap<&V, (usize, usize, usize)> = BTreeMap::new();
    for v in votes {
        let entry = tally.entry(&v.value).or_insert((0, usize::MAX, usize::MAX));
        entry.0 += 1;
        entry.1 = entry.1.min(v.rank);
        entry.2 = entry.2.min(v.distance);
    }
    tally
        .into_iter()
        .min_by_key(|&(_, (count, rank, distance))| (std::cmp::Reverse(count), rank, distance))
        .map(|(value, _)| value.clone())
}

#[cfg(test)]
mod tests {
    use chrono::NaiveDate;

    use super::*;
    use crate::extract::YesNo;

    fn vote<V>(value: V, rank: usize) -> Vote<V> {
        Vote {
            value,
            rank,
            distance: 0,
        }
    }

    #[test]
    fn plurality_wins() {
        let june4 = NaiveDate::from_ymd_opt(2014, 6, 4).unwrap();
        let june12 = NaiveDate::from_ymd_opt(2014, 6, 12).unwrap();
        let votes = [vote(june12, 0), vote(june4, 1), vote(june4, 2)];
        assert_eq!(majority_vote(&votes), Some(june4));
    }

    #[test]
    fn empty_is_null() {
        assert_eq!(majority_vote::<YesNo>(&[]), None);
    }

    #[test]
    fn tie_favors_seed() {
        assert_eq!(
            majority_vote(&[vote(YesNo::N, 1), vote(YesNo::Y, 0)]),
            Some(YesNo::Y)
        );
        assert_eq!(
            majority_vote(&[vote(YesNo::N, 0), vote(YesNo::Y, 1)]),
            Some(YesNo::N)
        );
    }

    #[test]
    fn tie_on_rank_falls_back_to_distance() {
        let votes = [
            Vote {
                value: 'a',
                rank: 0,
                distance: 4,
            },
            Vote {
                value: 'b',
                rank: 0,
                distance: 2,
            },
        ];
        assert_eq!(majority_vote(&votes), Some('b'));
    }
}
