use beerpath::gen::{generate, td_from_spqr, Family, GenSpec};
use beerpath::shortest::Oracle;
use beerpath::spqr::SpqrTree;
use beerpath::td::TdIndex;
use beerpath::tri::{Strategy, TriIndex};

fn specs() -> Vec<GenSpec> {
    let mut out = Vec::new();
    for n in [3, 4, 6, 9, 14, 25] {
        for directed in [false, true] {
            for family in [Family::SeriesParallel, Family::Hamiltonian { chords: n / 2 + 1 }] {
                out.push(GenSpec {
                    directed,
                    one_way: if directed { 0.2 } else { 0.0 },
                    multi: n % 2 == 0,
                    beer: 0.2,
                    wmax: 10,
                    ..GenSpec::new(family, n)
                });
            }
        }
    }
    out
}

#[test]
fn every_strategy_matches_the_oracle() {
    for (i, spec) in specs().iter().enumerate() {
        for seed in 0..6 {
            let (g, _) = generate::<i64>(spec, seed * 100 + i as u64);
            let o = Oracle::new(&g);
            for strategy in Strategy::ALL {
                let idx = TriIndex::build(g.clone(), strategy).unwrap();
                for s in 0..g.n() {
                    for t in 0..g.n() {
                        assert_eq!(idx.query(s, t).unwrap(), o.query(s, t), "{spec} seed {seed} {strategy} ({s},{t})");
                    }
                }
            }
        }
    }
}

#[test]
fn decomposition_index_matches_the_oracle() {
    for (i, spec) in specs().iter().enumerate() {
        for seed in 0..4 {
            let (g, _) = generate::<i64>(spec, seed * 100 + i as u64);
            let o = Oracle::new(&g);
            let td = td_from_spqr(&SpqrTree::build(&g, 0).unwrap());
            let idx = TdIndex::build(g.clone(), td).unwrap();
            for s in 0..g.n() {
                for t in 0..g.n() {
                    assert_eq!(idx.query(s, t).unwrap(), o.query(s, t), "{spec} seed {seed} ({s},{t})");
                }
            }
        }
    }
    for k in 1..=4 {
        for seed in 0..5 {
            let spec = GenSpec { beer: 0.15, wmax: 10, directed: seed % 2 == 1, ..GenSpec::new(Family::KTree { k, drop: 0.3 }, 20) };
            let (g, td) = generate::<i64>(&spec, seed);
            let o = Oracle::new(&g);
            let idx = TdIndex::build(g.clone(), td.unwrap()).unwrap();
            for s in 0..g.n() {
                for t in 0..g.n() {
                    assert_eq!(idx.query(s, t).unwrap(), o.query(s, t), "{spec} seed {seed} ({s},{t})");
                    let bags_s = idx.bags_of(s);
                    let bags_t = idx.bags_of(t);
                    let bs = bags_s[(s + t) % bags_s.len()];
                    let bt = bags_t[(s * 7 + t) % bags_t.len()];
                    assert_eq!(idx.query_with_bags(s, t, bs, bt).unwrap().0, o.query(s, t));
                }
            }
        }
    }
}
