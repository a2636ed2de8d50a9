// Standalone count of valid composition tables (labeled categories with
// identities fixed as the first n morphisms), without building categories.
use std::time::Instant;

fn count_tables(n: usize, m: usize, src: &[usize], tgt: &[usize]) -> u64 {
    let mut table = vec![usize::MAX; m * m];
    for g in 0..m {
        for f in 0..m {
            if tgt[f] != src[g] { continue; }
            if g < n { table[g * m + f] = f; }
            else if f < n { table[g * m + f] = g; }
        }
    }
    let free: Vec<(usize, usize)> = (n..m)
        .flat_map(|g| (n..m).map(move |f| (g, f)))
        .filter(|&(g, f)| tgt[f] == src[g])
        .collect();
    let cands: Vec<Vec<usize>> = free.iter()
        .map(|&(g, f)| (0..m).filter(|&c| src[c] == src[f] && tgt[c] == tgt[g]).collect())
        .collect();
    fn assoc_ok(table: &[usize], m: usize, src: &[usize], tgt: &[usize]) -> bool {
        for h in 0..m {
            for g in 0..m {
                if tgt[g] != src[h] { continue; }
                let hg = table[h * m + g];
                for f in 0..m {
                    if tgt[f] != src[g] { continue; }
                    let gf = table[g * m + f];
                    if gf == usize::MAX || hg == usize::MAX { continue; }
                    let l = table[h * m + gf];
                    let r = table[hg * m + f];
                    if l != usize::MAX && r != usize::MAX && l != r { return false; }
                }
            }
        }
        true
    }
    fn rec(d: usize, free: &[(usize,usize)], cands: &[Vec<usize>], table: &mut [usize],
           n: usize, m: usize, src: &[usize], tgt: &[usize]) -> u64 {
        if d == free.len() { return 1; }
        let (g, f) = free[d];
        let mut total = 0;
        for &c in &cands[d] {
            table[g * m + f] = c;
            if assoc_ok(table, m, src, tgt) {
                total += rec(d + 1, free, cands, table, n, m, src, tgt);
            }
        }
        table[g * m + f] = usize::MAX;
        total
    }
    rec(0, &free, &cands, &mut table, n, m, src, tgt)
}

fn main() {
    for max in 4..=7usize {
        let t0 = Instant::now();
        let mut grand = 0u64;
        for n in 1..=3usize {
            for m in n..=max {
                let k = m - n;
                let mut bases = 0u64;
                let combos = (n * n).pow(k as u32);
                for code0 in 0..combos {
                    let mut code = code0;
                    let mut src = vec![0; m];
                    let mut tgt = vec![0; m];
                    for i in 0..n { src[i] = i; tgt[i] = i; }
                    for i in n..m {
                        let p = code % (n * n); code /= n * n;
                        src[i] = p / n; tgt[i] = p % n;
                    }
                    bases += count_tables(n, m, &src, &tgt);
                }
                let degs = (3u64).pow(n as u32);
                grand += bases * degs;
            }
        }
        println!("max_morphisms={max}: total degreed instances {grand} in {:?}", t0.elapsed());
    }
}
