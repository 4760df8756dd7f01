use ratiolab::game::{distinguish_probability, find_consistent_plant, transcript_consistent, Algorithm, QueryTranscript};
use ratiolab::optimize::{brute_force_max_ratio, brute_force_min_ratio};
use ratiolab::oracle::{DecreasingInstance, IncreasingInstance, RatioOracle, SetFunction};
use ratiolab::setcore::{enumerate_subsets, random_k_subset};
use ratiolab::value::q;
use ratiolab::GroundSize;

fn g(n: usize) -> GroundSize {
    GroundSize::new(n).unwrap()
}

#[test]
fn decreasing_g_dominates_f() {
    for n in 3..=10 {
        for alpha in 2..=n as u64 {
            let plant = random_k_subset(g(n), alpha as usize, alpha).unwrap();
            let inst = DecreasingInstance::new(g(n), alpha, 1, q("1/7"), Some(plant)).unwrap();
            let (f, gr) = (inst.f(), inst.g_planted().unwrap());
            for s in enumerate_subsets(g(n), None).unwrap() {
                assert!(gr.value(s) >= f.value(s), "n={n} alpha={alpha} S={s}");
            }
        }
    }
}

#[test]
fn increasing_plant_changes_one_value() {
    for n in 2..=12 {
        let plant = random_k_subset(g(n), n / 2, 5).unwrap();
        let inst = IncreasingInstance::new(g(n), q("10"), q("1/3"), Some(plant)).unwrap();
        let (gg, gr) = (inst.g(), inst.g_planted().unwrap());
        let differing: Vec<_> = enumerate_subsets(g(n), None)
            .unwrap()
            .filter(|&s| gg.value(s) != gr.value(s))
            .collect();
        assert_eq!(differing, vec![plant]);
    }
}

#[test]
fn heuristics_stay_within_exhaustive_range() {
    let inst = DecreasingInstance::new(g(10), 4, 1, q("1/2"), Some(random_k_subset(g(10), 4, 1).unwrap())).unwrap();
    let (f, gr) = (inst.f(), inst.g_planted().unwrap());
    let min = brute_force_min_ratio(&mut RatioOracle::new(&f, &gr).unwrap()).unwrap().value;
    let max = brute_force_max_ratio(&mut RatioOracle::new(&f, &gr).unwrap()).unwrap().value;
    for seed in 0..50 {
        for alg in [Algorithm::LocalSearch, Algorithm::RandomSearch] {
            let mut oracle = RatioOracle::new(&f, &gr).unwrap();
            let r = alg.run(&mut oracle, 300, seed).unwrap();
            assert!(r.value >= min && r.value <= max);
            assert!(r.queries_used <= 300);
        }
    }
}

#[test]
fn distinguish_probability_monotone_in_beta() {
    for n in 1..=14 {
        for alpha in 0..=n {
            for s in 0..=n {
                let mut prev = distinguish_probability(n, alpha, 0, s).unwrap();
                for beta in 1..=n {
                    let p = distinguish_probability(n, alpha, beta, s).unwrap();
                    assert!(p <= prev);
                    prev = p;
                }
            }
        }
    }
}

#[test]
fn consistent_plant_reproduces_transcript() {
    let n = 14;
    let inst = IncreasingInstance::new(g(n), q("1000"), q("1/10"), None).unwrap();
    let (f, gg) = (inst.f(), inst.g());
    for seed in 0..10 {
        let mut oracle = RatioOracle::recording(&f, &gg).unwrap();
        let r = Algorithm::RandomSearch.run(&mut oracle, 2000, seed).unwrap();
        let transcript = QueryTranscript {
            entries: oracle.take_transcript(),
            returned: r.argset,
        };
        let plant = find_consistent_plant(&transcript, g(n)).unwrap();
        assert!(transcript.effective_sets().all(|s| s != plant));
        let planted = IncreasingInstance::new(g(n), q("1000"), q("1/10"), Some(plant)).unwrap();
        assert!(transcript_consistent(&transcript, &planted.f(), &planted.g_planted().unwrap()));
    }
}
