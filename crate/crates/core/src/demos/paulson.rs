//! The three mutually recursive functions obtained by turning a small
//! goto program into one function per label:
//!
//! ```text
//! F(x,y,z) = G(x+1,y,z)
//! G(x,y,z) = if y<z then F(x,y,z) else H(x,x+y,z)
//! H(x,y,z) = if z>0 then F(x,y,z-x) else (x,y,z)
//! ```
//!
//! All calls are tail calls, so evaluation is a loop over the current label.

use std::fmt;

use num_bigint::BigInt;

use super::DemoError;

pub const PAULSON_STEP_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Entry {
    F,
    G,
    H,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trio {
    pub x: BigInt,
    pub y: BigInt,
    pub z: BigInt,
}

impl Trio {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>, z: impl Into<BigInt>) -> Self {
        Trio {
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }
}

impl fmt::Display for Trio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// Evaluates from `entry`, counting one step per call.
pub fn run_from(entry: Entry, start: Trio, budget: u64) -> Result<Trio, DemoError> {
    let Trio { mut x, mut y, mut z } = start;
    let mut label = entry;
    let zero = BigInt::from(0);
    for _ in 0..budget {
        match label {
            Entry::F => {
                x += 1;
                label = Entry::G;
            }
            Entry::G => {
                if y < z {
                    label = Entry::F;
                } else {
                    y += &x;
                    label = Entry::H;
                }
            }
            Entry::H => {
                if z > zero {
                    z -= &x;
                    label = Entry::F;
                } else {
                    return Ok(Trio { x, y, z });
                }
            }
        }
    }
    Err(DemoError::StepBudgetExceeded { budget })
}

/// `F(x, y, z)` under the default step budget.
pub fn paulson_trio(start: Trio) -> Result<Trio, DemoError> {
    run_from(Entry::F, start, PAULSON_STEP_BUDGET)
}

pub fn paulson_trio_with_budget(start: Trio, budget: u64) -> Result<Trio, DemoError> {
    run_from(Entry::F, start, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Direct recursive transcription, fine for short runs.
    fn f(x: i64, y: i64, z: i64, fuel: u32) -> Option<(i64, i64, i64)> {
        g(x + 1, y, z, fuel.checked_sub(1)?)
    }
    fn g(x: i64, y: i64, z: i64, fuel: u32) -> Option<(i64, i64, i64)> {
        let fuel = fuel.checked_sub(1)?;
        if y < z {
            f(x, y, z, fuel)
        } else {
            h(x, x + y, z, fuel)
        }
    }
    fn h(x: i64, y: i64, z: i64, fuel: u32) -> Option<(i64, i64, i64)> {
        let fuel = fuel.checked_sub(1)?;
        if z > 0 {
            f(x, y, z - x, fuel)
        } else {
            Some((x, y, z))
        }
    }

    #[test]
    fn imperative_result() {
        assert_eq!(paulson_trio(Trio::new(0, 0, 0)).unwrap(), Trio::new(1, 1, 0));
        assert_eq!(paulson_trio(Trio::new(0, 0, 0)).unwrap().to_string(), "(1,1,0)");
    }

    #[test]
    fn h_base_case_and_g_trace() {
        assert_eq!(run_from(Entry::H, Trio::new(4, 9, 0), 1).unwrap(), Trio::new(4, 9, 0));
        // G(1,5,2) -> H(1,6,2) -> F(1,6,1) -> G(2,6,1) -> H(2,8,1) -> F(2,8,-1)
        //          -> G(3,8,-1) -> H(3,11,-1) -> (3,11,-1)
        assert_eq!(run_from(Entry::G, Trio::new(1, 5, 2), 100).unwrap(), Trio::new(3, 11, -1));
        assert_eq!(run_from(Entry::G, Trio::new(1, 5, 2), 7), Err(DemoError::StepBudgetExceeded { budget: 7 }));
        assert!(run_from(Entry::G, Trio::new(1, 5, 2), 8).is_ok());
    }

    #[test]
    fn nonterminating_input_hits_budget() {
        assert_eq!(
            paulson_trio(Trio::new(0, 0, 1)),
            Err(DemoError::StepBudgetExceeded {
                budget: PAULSON_STEP_BUDGET
            })
        );
    }

    #[test]
    fn matches_recursive_transcription() {
        for x in -3..4 {
            for y in -3..4 {
                for z in -3..4 {
                    let expect = f(x, y, z, 200);
                    let got = run_from(Entry::F, Trio::new(x, y, z), 200).ok();
                    if let Some((a, b, c)) = expect {
                        assert_eq!(got, Some(Trio::new(a, b, c)), "F({x},{y},{z})");
                    }
                }
            }
        }
    }

    #[test]
    fn big_values_do_not_overflow() {
        let big = BigInt::from(i64::MAX) * BigInt::from(4);
        let out = paulson_trio(Trio::new(big.clone(), big.clone(), 0)).unwrap();
        assert_eq!(out.y, &big * BigInt::from(2) + BigInt::from(1));
    }
}
