use serde::Serialize;

use crate::corpus::PaperRecord;
use crate::{Error, Result};

/// Top-conference share, top-journal share and top-conference coverage, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prestige {
    pub tcs: f64,
    pub tjs: f64,
    pub tcc: f64,
}

/// Share of papers with at least one top-conference citation.
pub fn top_conf_coverage<'a, I>(records: I) -> Result<f64>
where
    I: IntoIterator<Item = &'a PaperRecord>,
{
    let (mut n, mut covered) = (0usize, 0usize);
    for r in records {
        n += 1;
        covered += usize::from(r.top_conf_citations >= 1);
    }
    if n == 0 {
        return Err(Error::EmptyVenue);
    }
    Ok(100.0 * covered as f64 / n as f64)
}

pub fn prestige<'a, I>(records: I) -> Result<Prestige>
where
    I: IntoIterator<Item = &'a PaperRecord>,
    I::IntoIter: Clone,
{
    let records = records.into_iter();
    let tcc = top_conf_coverage(records.clone())?;
    let (mut total, mut conf, mut journal) = (0u64, 0u64, 0u64);
    for r in records {
        total += r.citation_count;
        conf += r.top_conf_citations;
        journal += r.top_journal_citations;
    }
    if total == 0 {
        return Err(Error::ZeroCitationMass);
    }
    Ok(Prestige {
        tcs: 100.0 * conf as f64 / total as f64,
        tjs: 100.0 * journal as f64 / total as f64,
        tcc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::record;

    #[test]
    fn single_fully_covered_record() {
        let mut r = record("a", "ACL", 2020, 5);
        r.top_conf_citations = 5;
        let p = prestige([&r]).unwrap();
        assert_eq!((p.tcs, p.tcc, p.tjs), (100.0, 100.0, 0.0));
    }

    #[test]
    fn coverage_counts_records_not_citations() {
        let mut a = record("a", "ACL", 2020, 10);
        a.top_conf_citations = 3;
        a.top_journal_citations = 1;
        let b = record("b", "ACL", 2020, 10);
        let p = prestige([&a, &b]).unwrap();
        assert_eq!(p.tcc, 50.0);
        assert_eq!(p.tcs, 15.0);
        assert_eq!(p.tjs, 5.0);
        a.top_conf_citations = 6;
        assert_eq!(prestige([&a, &b]).unwrap().tcc, 50.0);
    }

    #[test]
    fn errors() {
        let empty: [&PaperRecord; 0] = [];
        assert_eq!(prestige(empty).unwrap_err(), Error::EmptyVenue);
        let z = record("z", "ACL", 2020, 0);
        assert_eq!(prestige([&z]).unwrap_err(), Error::ZeroCitationMass);
        assert_eq!(top_conf_coverage([&z]).unwrap(), 0.0);
    }
}
