use serde::Serialize;

use super::Corpus;
use crate::{Error, Result};

/// How a per-paper citation value is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowMode {
    /// Each paper's cumulative `citation_count`.
    Cumulative,
    /// Citations received during year `t`, restricted to papers published in `t`.
    SingleYear(i32),
}

/// N_t, C_t and the year-t citation vector of one venue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VenueYearAggregate {
    pub venue: String,
    pub year: i32,
    /// Papers published in `year`.
    pub n_t: u64,
    /// Citations received during `year` by all venue papers published up to `year`.
    pub c_t: u64,
    /// Sorted single-year citation vector of the `year` cohort.
    pub citation_vector: Vec<u64>,
}

fn check_year(corpus: &Corpus, year: i32) -> Result<()> {
    let w = corpus.window();
    if w.contains(year) {
        Ok(())
    } else {
        Err(Error::YearOutOfWindow {
            year,
            start: w.start,
            end: w.end,
        })
    }
}

/// Sorted (non-decreasing) citation values of a venue under `mode`.
pub fn citation_vector(corpus: &Corpus, venue: &str, mode: WindowMode) -> Result<Vec<u64>> {
    let mut v: Vec<u64> = match mode {
        WindowMode::Cumulative => corpus
            .venue_records(venue)?
            .map(|r| r.citation_count)
            .collect(),
        WindowMode::SingleYear(t) => corpus
            .venue_year_records(venue, t)?
            .map(|r| r.citations_in(t))
            .collect(),
    };
    v.sort_unstable();
    Ok(v)
}

/// Sorted cumulative counts of the papers a venue published in `year`.
pub fn cohort_vector(corpus: &Corpus, venue: &str, year: i32) -> Result<Vec<u64>> {
    let mut v: Vec<u64> = corpus
        .venue_year_records(venue, year)?
        .map(|r| r.citation_count)
        .collect();
    v.sort_unstable();
    Ok(v)
}

pub fn venue_year_aggregate(corpus: &Corpus, venue: &str, year: i32) -> Result<VenueYearAggregate> {
    check_year(corpus, year)?;
    let mut n_t = 0;
    let mut c_t = 0;
    for r in corpus.venue_records(venue)? {
        if r.year == year {
            n_t += 1;
        }
        if r.year <= year {
            c_t += r.citations_in(year);
        }
    }
    Ok(VenueYearAggregate {
        venue: venue.to_string(),
        year,
        n_t,
        c_t,
        citation_vector: citation_vector(corpus, venue, WindowMode::SingleYear(year))?,
    })
}

/// Aggregates for every year of the corpus window, in year order.
pub fn venue_aggregates(corpus: &Corpus, venue: &str) -> Result<Vec<VenueYearAggregate>> {
    corpus
        .window()
        .years()
        .map(|y| venue_year_aggregate(corpus, venue, y))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::record;
    use crate::corpus::Window;

    fn sample() -> Corpus {
        let mut a = record("a", "ACL", 2019, 10);
        a.annual_citations.extend([(2019, 1), (2020, 4), (2021, 5)]);
        let mut b = record("b", "ACL", 2020, 9);
        b.annual_citations.extend([(2020, 2), (2021, 7)]);
        let mut c = record("c", "EMNLP", 2020, 3);
        c.annual_citations.extend([(2020, 3)]);
        Corpus::from_records(vec![a, b, c], Window::default()).unwrap()
    }

    #[test]
    fn citation_mass_accumulates_earlier_cohorts() {
        let c = sample();
        let agg = venue_year_aggregate(&c, "ACL", 2020).unwrap();
        assert_eq!((agg.n_t, agg.c_t), (1, 6));
        assert_eq!(agg.citation_vector, vec![2]);
        let agg = venue_year_aggregate(&c, "ACL", 2021).unwrap();
        assert_eq!((agg.n_t, agg.c_t), (0, 12));
        assert!(agg.citation_vector.is_empty());
    }

    #[test]
    fn empty_corpus_aggregates_to_zero() {
        let c = Corpus::empty(Window::default()).with_known_venues(["ACL"]);
        let agg = venue_year_aggregate(&c, "ACL", 2014).unwrap();
        assert_eq!((agg.n_t, agg.c_t), (0, 0));
    }

    #[test]
    fn errors() {
        let c = sample();
        assert_eq!(
            venue_year_aggregate(&c, "ACL", 2030).unwrap_err(),
            Error::YearOutOfWindow { year: 2030, start: 2014, end: 2024 }
        );
        assert!(matches!(
            citation_vector(&c, "NIPS", WindowMode::Cumulative),
            Err(Error::UnknownVenue(_))
        ));
    }

    #[test]
    fn cumulative_vector_is_sorted() {
        let rs = vec![record("x", "ACL", 2020, 7), record("y", "ACL", 2020, 2), record("z", "ACL", 2021, 11)];
        let c = Corpus::from_records(rs, Window::default()).unwrap();
        assert_eq!(citation_vector(&c, "ACL", WindowMode::Cumulative).unwrap(), vec![2, 7, 11]);
        assert_eq!(cohort_vector(&c, "ACL", 2020).unwrap(), vec![2, 7]);
    }

    #[test]
    fn single_year_restricts_to_cohort() {
        let mut r = record("x", "ACL", 2019, 5);
        r.annual_citations.insert(2020, 5);
        let c = Corpus::from_records(vec![r], Window::default()).unwrap();
        assert!(citation_vector(&c, "ACL", WindowMode::SingleYear(2020)).unwrap().is_empty());
    }
}
