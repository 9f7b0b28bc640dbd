use combalg::freegroup::{
    check_expression, cyclic_reduce, free_reduce, nielsen_reduce, replay_nielsen, replay_whitehead, same_subgroup,
    subgroup_membership, whitehead_minimize, FreeWord, GeneratorTuple, Membership,
};
use proptest::prelude::*;

const RANK: usize = 3;

fn raw_word(max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2, 3, -3]), 0..=max_len)
}

fn word(max_len: usize) -> impl Strategy<Value = FreeWord> {
    raw_word(max_len).prop_map(|w| free_reduce(&w, RANK).unwrap())
}

fn tuple() -> impl Strategy<Value = GeneratorTuple> {
    prop::collection::vec(word(5).prop_filter("nonempty", |w| !w.is_empty()), 1..=3)
        .prop_map(|ws| GeneratorTuple::new(ws).unwrap())
}

proptest! {
    #[test]
    fn free_reduce_is_idempotent(raw in raw_word(20)) {
        let w = free_reduce(&raw, RANK).unwrap();
        prop_assert_eq!(free_reduce(w.letters(), RANK).unwrap(), w.clone());
        prop_assert!(w.letters().windows(2).all(|p| p[0] != -p[1]));
    }

    #[test]
    fn reduction_respects_concatenation(a in raw_word(10), b in raw_word(10)) {
        let joined: Vec<i32> = a.iter().chain(&b).copied().collect();
        let (ra, rb) = (free_reduce(&a, RANK).unwrap(), free_reduce(&b, RANK).unwrap());
        prop_assert_eq!(free_reduce(&joined, RANK).unwrap(), ra.mul(&rb));
    }

    #[test]
    fn group_laws(a in word(8), b in word(8), c in word(8)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inverse()).is_empty());
        prop_assert_eq!(a.mul(&b).inverse(), b.inverse().mul(&a.inverse()));
    }

    #[test]
    fn cyclic_reduction_shortens(w in word(12)) {
        let c = cyclic_reduce(&w);
        prop_assert!(c.len() <= w.len());
        prop_assert_eq!(cyclic_reduce(c.word()), c);
    }

    #[test]
    fn nielsen_trace_replays(y in tuple()) {
        let r = nielsen_reduce(&y);
        prop_assert_eq!(replay_nielsen(&y, &r.trace).unwrap(), r.tuple.clone());
        prop_assert!(r.tuple.complexity() <= y.complexity());
        prop_assert!(same_subgroup(&y, &r.tuple).unwrap());
    }

    #[test]
    fn whitehead_trace_replays(w in word(10)) {
        let c = cyclic_reduce(&w);
        let (min, trace) = whitehead_minimize(&c);
        prop_assert_eq!(replay_whitehead(&c, &trace).unwrap(), min.clone());
        prop_assert!(min.len() <= c.len());
        prop_assert!(trace.steps.windows(2).all(|s| s[1].complexity < s[0].complexity));
    }

    #[test]
    fn products_of_generators_are_members(y in tuple(), picks in prop::collection::vec((0usize..3, any::<bool>()), 0..6)) {
        let mut w = FreeWord::identity(RANK);
        for (i, inv) in picks {
            let g = &y.words()[i % y.len()];
            w = w.mul(&if inv { g.inverse() } else { g.clone() });
        }
        match subgroup_membership(&y, &w).unwrap() {
            Membership::Member { expression } => prop_assert!(check_expression(&y, &expression, &w).is_ok()),
            Membership::NonMember => prop_assert!(false, "{} not found in the subgroup", w),
        }
    }
}
