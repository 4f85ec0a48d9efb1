//! Incremental scan over centers `c, c + K, c + 2K, …` tracking `c² − N`.
//!
//! Moving from `c` to `c + K` adds `2Kc + K²` to the discriminant, and that
//! increment itself grows by `2K²` per step, so the scan costs two in-place
//! additions per center. The discriminant is also tracked modulo
//! [`SQUARE_SCREEN_MODULUS`] so most non-squares are rejected without
//! touching the big integers.

use num_traits::ToPrimitive;

use crate::arith::{exact_square_root, passes_square_screen, Natural, SQUARE_SCREEN_MODULUS};

const M: u64 = SQUARE_SCREEN_MODULUS as u64;

fn residue(x: &Natural) -> u64 {
    (x % M).to_u64().expect("residue below screen modulus")
}

#[derive(Debug, Clone)]
pub(crate) struct CenterWalk {
    center: Natural,
    step: Natural,
    disc: Natural,
    delta: Natural,
    delta_step: Natural,
    disc_res: u64,
    delta_res: u64,
    delta_step_res: u64,
}

impl CenterWalk {
    /// Starts at `center` with `center² ≥ target`.
    pub(crate) fn new(center: Natural, step: Natural, target: &Natural) -> Self {
        let square = &center * &center;
        assert!(
            square >= *target,
            "walk must start at or above sqrt(target)"
        );
        let disc = square - target;
        let delta = ((&step * &center) << 1u32) + &step * &step;
        let delta_step = (&step * &step) << 1u32;
        Self {
            disc_res: residue(&disc),
            delta_res: residue(&delta),
            delta_step_res: residue(&delta_step),
            center,
            step,
            disc,
            delta,
            delta_step,
        }
    }

    pub(crate) fn center(&self) -> &Natural {
        &self.center
    }

    pub(crate) fn disc(&self) -> &Natural {
        &self.disc
    }

    /// Square root of the current discriminant, if it is a perfect square.
    pub(crate) fn root(&self) -> Option<Natural> {
        if !passes_square_screen(self.disc_res as u32) {
            return None;
        }
        exact_square_root(&self.disc)
    }

    /// Moves `k` centers forward at once.
    pub(crate) fn advance_by(&mut self, k: u64) {
        match k {
            0 => {}
            1 => self.advance(),
            _ => {
                // disc' = disc + k·delta + k(k−1)/2 · delta_step
                let pairs = (Natural::from(k) * (k - 1)) >> 1u32;
                self.disc += &self.delta * k + &self.delta_step * &pairs;
                self.delta += &self.delta_step * k;
                self.center += &self.step * k;
                self.disc_res = residue(&self.disc);
                self.delta_res = residue(&self.delta);
            }
        }
    }

    pub(crate) fn advance(&mut self) {
        self.disc += &self.delta;
        self.delta += &self.delta_step;
        self.center += &self.step;
        self.disc_res = (self.disc_res + self.delta_res) % M;
        self.delta_res = (self.delta_res + self.delta_step_res) % M;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::nat;

    #[test]
    fn tracks_discriminant_exactly() {
        let target = nat(325);
        let mut walk = CenterWalk::new(nat(19), nat(8), &target);
        for k in 0..200u64 {
            let c = 19 + 8 * k;
            assert_eq!(*walk.center(), nat(c));
            assert_eq!(*walk.disc(), nat(c * c - 325));
            assert_eq!(walk.disc_res, (c * c - 325) % M);
            walk.advance();
        }
    }

    #[test]
    fn jumps_agree_with_single_steps() {
        let target = nat(9797);
        let mut stepped = CenterWalk::new(nat(99), nat(8), &target);
        let mut jumped = stepped.clone();
        for k in [0u64, 1, 2, 5, 17, 1000] {
            for _ in 0..k {
                stepped.advance();
            }
            jumped.advance_by(k);
            assert_eq!(stepped.center(), jumped.center());
            assert_eq!(stepped.disc(), jumped.disc());
            assert_eq!(stepped.disc_res, jumped.disc_res);
            assert_eq!(stepped.delta, jumped.delta);
            assert_eq!(stepped.delta_res, jumped.delta_res);
        }
    }

    #[test]
    fn finds_known_roots() {
        let target = nat(325);
        let mut walk = CenterWalk::new(nat(19), nat(8), &target);
        assert_eq!(walk.root(), Some(nat(6)));
        walk.advance();
        assert_eq!(walk.root(), None);
        walk.advance();
        assert_eq!(walk.root(), Some(nat(30)));
    }
}
