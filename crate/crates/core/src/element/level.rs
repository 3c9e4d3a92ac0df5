use std::sync::{Arc, Mutex};

use super::Elem;
use crate::counting::catalan_count;
use crate::error::{MagmaError, Result};
use crate::limits::Limits;

static LEVELS: Mutex<Vec<Arc<[Elem]>>> = Mutex::new(Vec::new());

/// All elements of length `n`, each exactly once.
///
/// The order is by length of the left summand, then by the left summand's
/// rank in its level, then by the right summand's rank; it coincides with
/// the `Ord` of [`Elem`]. Levels are cached for the life of the process.
pub fn enumerate_level(n: usize, limits: &Limits) -> Result<Arc<[Elem]>> {
    if n == 0 {
        return Err(MagmaError::domain("levels start at n = 1"));
    }
    let size = catalan_count(n as u64);
    if size > limits.max_level_elements.into() {
        return Err(MagmaError::resource(
            format!("level {n} has {size} elements"),
            limits.max_level_elements,
        ));
    }
    let mut levels = LEVELS.lock().expect("level cache poisoned");
    if levels.is_empty() {
        levels.push(Arc::from([Elem::ONE]));
    }
    while levels.len() < n {
        let m = levels.len() + 1;
        let mut next = Vec::new();
        for left_len in 1..m {
            for &l in levels[left_len - 1].iter() {
                for &r in levels[m - left_len - 1].iter() {
                    next.push(l + r);
                }
            }
        }
        levels.push(Arc::from(next));
    }
    Ok(Arc::clone(&levels[n - 1]))
}

/// Every element of length at most `max_len`, shortest first.
pub fn elements_up_to(max_len: usize, limits: &Limits) -> Result<Vec<Elem>> {
    let mut all = Vec::new();
    for n in 1..=max_len {
        all.extend(enumerate_level(n, limits)?.iter().copied());
    }
    Ok(all)
}
