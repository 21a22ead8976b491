use crate::catalog::Requirement;
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ColumnNames {
    pub design: Vec<String>,
    pub performance: Vec<String>,
    pub conditions: Vec<String>,
    pub sdfs: Vec<String>,
}

/// An n×d table of designs with optional annotations.
///
/// Performance values are always stored maximization-framed. Minimized
/// objectives are negated once, at ingestion.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignSet {
    designs: Matrix,
    performance: Option<Matrix>,
    valid: Option<Vec<bool>>,
    conditions: Option<Matrix>,
    sdfs: Option<Matrix>,
    names: Option<ColumnNames>,
}

impl DesignSet {
    pub fn new(designs: Matrix) -> Result<Self> {
        if designs.is_empty() {
            return Err(EvalError::Empty("design set"));
        }
        if !designs.all_finite() {
            return Err(EvalError::invalid("design matrix contains non-finite values"));
        }
        Ok(DesignSet {
            designs,
            performance: None,
            valid: None,
            conditions: None,
            sdfs: None,
            names: None,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    fn check_rows(&self, m: &Matrix, what: &'static str) -> Result<()> {
        if m.nrows() != self.len() {
            return Err(EvalError::DimensionMismatch {
                context: what,
                expected: self.len(),
                found: m.nrows(),
            });
        }
        if !m.all_finite() {
            return Err(EvalError::invalid(format!("{what} contains non-finite values")));
        }
        Ok(())
    }

    /// Attach maximization-framed performance values.
    pub fn with_performance(mut self, perf: Matrix) -> Result<Self> {
        self.check_rows(&perf, "performance rows")?;
        self.performance = Some(perf);
        Ok(self)
    }

    pub fn with_valid(mut self, valid: Vec<bool>) -> Result<Self> {
        if valid.len() != self.len() {
            return Err(EvalError::DimensionMismatch {
                context: "validity flags",
                expected: self.len(),
                found: valid.len(),
            });
        }
        self.valid = Some(valid);
        Ok(self)
    }

    pub fn with_conditions(mut self, conditions: Matrix) -> Result<Self> {
        self.check_rows(&conditions, "condition rows")?;
        self.conditions = Some(conditions);
        Ok(self)
    }

    /// Attach precomputed per-constraint signed distances (positive = satisfied).
    pub fn with_sdfs(mut self, sdfs: Matrix) -> Result<Self> {
        self.check_rows(&sdfs, "sdf rows")?;
        self.sdfs = Some(sdfs);
        Ok(self)
    }

    pub fn with_names(mut self, names: ColumnNames) -> Self {
        self.names = Some(names);
        self
    }

    pub fn len(&self) -> usize {
        self.designs.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.designs.ncols()
    }

    pub fn designs(&self) -> &Matrix {
        &self.designs
    }

    pub fn performance(&self) -> Option<&Matrix> {
        self.performance.as_ref()
    }

    pub fn valid(&self) -> Option<&[bool]> {
        self.valid.as_deref()
    }

    pub fn conditions(&self) -> Option<&Matrix> {
        self.conditions.as_ref()
    }

    pub fn sdfs(&self) -> Option<&Matrix> {
        self.sdfs.as_ref()
    }

    pub fn names(&self) -> Option<&ColumnNames> {
        self.names.as_ref()
    }

    /// Performance or a named-requirement error for `metric`.
    pub fn require_performance(&self, metric: &str) -> Result<&Matrix> {
        self.performance
            .as_ref()
            .ok_or_else(|| EvalError::missing(metric, Requirement::Perf))
    }

    pub fn require_conditions(&self, metric: &str) -> Result<&Matrix> {
        self.conditions
            .as_ref()
            .ok_or_else(|| EvalError::missing(metric, Requirement::Cond))
    }

    pub fn require_valid(&self, metric: &str) -> Result<&[bool]> {
        self.valid
            .as_deref()
            .ok_or_else(|| EvalError::missing(metric, Requirement::Const))
    }

    pub fn require_sdfs(&self, metric: &str) -> Result<&Matrix> {
        self.sdfs
            .as_ref()
            .ok_or_else(|| EvalError::missing(metric, Requirement::CFC))
    }

    /// Subset of rows, annotations included.
    pub fn select(&self, indices: &[usize]) -> Result<DesignSet> {
        if indices.is_empty() {
            return Err(EvalError::Empty("row selection"));
        }
        Ok(DesignSet {
            designs: self.designs.select_rows(indices),
            performance: self.performance.as_ref().map(|m| m.select_rows(indices)),
            valid: self
                .valid
                .as_ref()
                .map(|v| indices.iter().map(|&i| v[i]).collect()),
            conditions: self.conditions.as_ref().map(|m| m.select_rows(indices)),
            sdfs: self.sdfs.as_ref().map(|m| m.select_rows(indices)),
            names: self.names.clone(),
        })
    }

    /// Same annotations, new design matrix (used by scaling).
    pub(crate) fn with_designs(&self, designs: Matrix) -> DesignSet {
        DesignSet {
            designs,
            ..self.clone()
        }
    }

    /// Rows split into (valid, invalid) design matrices using the validity flags.
    pub fn split_by_validity(&self, metric: &str) -> Result<(Option<Matrix>, Option<Matrix>)> {
        let valid = self.require_valid(metric)?;
        let (ok, bad): (Vec<usize>, Vec<usize>) = (0..self.len()).partition(|&i| valid[i]);
        let pick = |idx: Vec<usize>| (!idx.is_empty()).then(|| self.designs.select_rows(&idx));
        Ok((pick(ok), pick(bad)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn annotation_rows_must_match() {
        let set = DesignSet::from_rows(&[[0.0, 1.0], [2.0, 3.0]]).unwrap();
        let perf = Matrix::from_rows(&[[1.0]]).unwrap();
        assert!(set.clone().with_performance(perf).is_err());
        assert!(set.clone().with_valid(vec![true]).is_err());
        assert!(set.with_valid(vec![true, false]).is_ok());
    }

    #[test]
    fn missing_annotations_name_the_requirement() {
        let set = DesignSet::from_rows(&[[0.0]]).unwrap();
        let err = set.require_sdfs("signed_distance_to_constraints").unwrap_err();
        assert!(err.to_string().contains("CFC"));
        let err = set.require_performance("dtai").unwrap_err();
        assert!(err.to_string().contains("Perf"));
    }

    #[test]
    fn empty_and_nonfinite_rejected() {
        let rows: Vec<Vec<f64>> = vec![];
        assert!(DesignSet::from_rows(&rows).is_err());
        assert!(DesignSet::from_rows(&[[f64::NAN]]).is_err());
    }

    #[test]
    fn select_keeps_annotations() {
        let set = DesignSet::from_rows(&[[0.0], [1.0], [2.0]])
            .unwrap()
            .with_valid(vec![true, false, true])
            .unwrap();
        let sub = set.select(&[2, 1]).unwrap();
        assert_eq!(sub.designs().column(0), vec![2.0, 1.0]);
        assert_eq!(sub.valid().unwrap(), &[true, false]);
        let (ok, bad) = set.split_by_validity("x").unwrap();
        assert_eq!(ok.unwrap().nrows(), 2);
        assert_eq!(bad.unwrap().nrows(), 1);
    }
}
