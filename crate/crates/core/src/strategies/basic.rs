use super::{Rounds, StrategyBuilder, BASE_CASE_ORDER};
use crate::tree::{find_centre, remove_vertex, Tree};

impl StrategyBuilder {
    /// Centre decomposition: one cat sits on the centre for the whole run
    /// while the others clean the components of `t - v` one after another.
    pub(super) fn basic_rounds(&mut self, t: &Tree) -> Rounds {
        if t.order() <= BASE_CASE_ORDER {
            return self.base_witness(t);
        }
        let v = find_centre(t);
        let mut rounds = Vec::new();
        for comp in remove_vertex(t, v).components {
            for shot in self.basic_rounds(&comp.tree) {
                let mut mapped: Vec<usize> = shot.iter().map(|&i| comp.original[i]).collect();
                mapped.push(v);
                rounds.push(mapped);
            }
        }
        rounds
    }
}

#[cfg(test)]
mod tests {
    use crate::game::{verify_winning, GameSemantics};
    use crate::strategies::basic_strategy;
    use crate::tree::{random_tree, Tree};
    use crate::{ceil_log2, Schedule};

    #[test]
    fn single_vertex() {
        let s = basic_strategy(&Tree::single_vertex());
        assert_eq!(s, Schedule::new(1, vec![vec![0]]).unwrap());
    }

    #[test]
    fn nine_path_uses_one_cat() {
        let p9 = Tree::path(9).unwrap();
        let s = basic_strategy(&p9);
        assert_eq!(s.r(), 1);
        assert!(verify_winning(&p9, &s, GameSemantics::PAPER));
    }

    #[test]
    fn random_hundred() {
        let t = random_tree(100, 5);
        let s = basic_strategy(&t);
        assert!(s.r() <= ceil_log2(100));
        assert!(verify_winning(&t, &s, GameSemantics::PAPER));
    }
}
