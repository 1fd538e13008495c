"""Throwaway tuning probes. Delete before finishing."""
import sys

import numpy as np

from synthaudit import seeds
from synthaudit.mixture import fit_gmm, fit_gmm_best, predict, smallest_clusters
from synthaudit.metrics.report import privacy_report
from synthaudit.synthesis.models import fit as fit_model
from synthaudit.synthesis.dp import DpBudget
from synthaudit.synthesis.adapter import DiscretizedSampler
from synthaudit.tabular.discretize import apply_discretizer, fit_discretizer
from synthaudit.tabular.generate import gen_censuslite, gen_gauss, split

MARKERS = (8, 9)


def census_truth(seed, n=6000, k=10, floor=0.1, restarts=5):
    ds = gen_censuslite(n, seed)
    train, test = split(ds, seed)
    budget = train.n_rows // 10
    m = fit_gmm_best(train, k=k, restarts=restarts, seed=seed,
                     encoding="onehot", floor=floor)
    lab = predict(m, train)
    chosen = smallest_clusters(m, lab, budget)
    sizes = np.bincount(lab, minlength=k)
    truth = np.isin(lab, chosen)
    col0 = train.cols[0]
    marker = np.isin(col0, MARKERS)
    return {
        "train": train, "test": test, "sizes": sorted(sizes.tolist()),
        "chosen_sizes": [int(sizes[c]) for c in chosen],
        "n_truth": int(truth.sum()), "n_marker": int(marker.sum()),
        "marker_in_truth": int((truth & marker).sum()),
        "junk_in_truth": int((truth & ~marker).sum()),
    }


def probe_truth(floor, restarts=5):
    print(f"== censuslite truth stability, floor={floor} restarts={restarts}")
    for seed in range(10):
        r = census_truth(seed, floor=floor, restarts=restarts)
        ok = (r["junk_in_truth"] == 0
              and r["marker_in_truth"] >= 0.97 * r["n_marker"])
        print(f" seed={seed} sizes={r['sizes']} chosen={r['chosen_sizes']} "
              f"truth={r['n_truth']} markers={r['n_marker']} "
              f"overlap={r['marker_in_truth']} junk={r['junk_in_truth']} "
              f"{'OK' if ok else 'BAD'}")


def probe_metrics():
    print("== censuslite metric landscape (v2 profiles)")
    ds = gen_censuslite(6000, 0)
    train, test = split(ds, 0)
    for kind, eps in [("independent", None), ("independent", 1.0),
                      ("independent", 0.1), ("privbayes_lite", None),
                      ("privbayes_lite", 1.0), ("privbayes_lite", 0.1)]:
        dp = DpBudget(eps) if eps else None
        model = fit_model(kind, train, dp=dp, seed=0)
        synth = model.sample(3000, 1)
        rep = privacy_report(train, test, synth, metric="hamming")
        print(f" {kind} eps={eps}: ims=({rep.ims.share_synth:.3f},"
              f"{rep.ims.share_test:.3f},{rep.ims.passed}) "
              f"dcr_pct5=({rep.dcr.pct5_synth:.3f},{rep.dcr.pct5_test:.3f},"
              f"{rep.dcr.passed}) nndr_pct5=({rep.nndr.pct5_synth:.3f},"
              f"{rep.nndr.pct5_test:.3f},{rep.nndr.passed})")


def probe_locator_synth(floor=0.1, factor=1.5, restarts=5):
    print(f"== censuslite locator on synth, floor={floor} factor={factor}")
    for seed in [0, 1, 2]:
        t = census_truth(seed)
        train = t["train"]
        truth = np.zeros(train.n_rows, dtype=bool)
        # recompute truth rows via the frozen rule
        from synthaudit.tabular.outliers import GmmSmallest, label_outliers
        tr_idx = label_outliers(train, GmmSmallest(seed=seed))
        truth[tr_idx] = True
        n_out = len(tr_idx)
        targets = train.select(tr_idx)
        for kind, eps in [("independent", None), ("independent", 0.1),
                          ("privbayes_lite", None), ("privbayes_lite", 0.1)]:
            dp = DpBudget(eps) if eps else None
            model = fit_model(kind, train, dp=dp, seed=seed)
            sample = model.sample(3 * train.n_rows, seeds.derive(seed, "s"))
            budget = round(factor * n_out * sample.n_rows / train.n_rows)
            m = fit_gmm_best(sample, k=10, restarts=restarts, seed=seed,
                             encoding="onehot", floor=floor)
            lab = predict(m, sample)
            chosen = smallest_clusters(m, lab, budget)
            sizes = np.bincount(lab, minlength=10)
            tr_lab = predict(m, targets)
            pred_ok = np.isin(tr_lab, chosen).mean()
            in_chosen = np.isin(lab, chosen).sum()
            print(f" seed={seed} {kind} eps={eps}: n_out={n_out} "
                  f"budget={budget} "
                  f"chosen_sizes={[int(sizes[c]) for c in chosen]} "
                  f"cand_rows={int(in_chosen)} target_pred={pred_ok:.2f}")


def locator_2d(variant, seed, k=10, n_train=1000, factor=1.5):
    train = gen_gauss(2, n_train, seed)
    pts = np.column_stack([train.cols[0], train.cols[1]])
    radius = 2.15
    n_out = int((np.hypot(pts[:, 0], pts[:, 1]) > radius).sum())
    model = fit_model("oracle", train, seed=seed)
    sample = model.sample(3 * n_train, seeds.derive(seed, "loc"))
    disc = fit_discretizer(sample, n_bins=200, strategy="uniform")
    dsamp = apply_discretizer(disc, sample)
    budget = round(factor * n_out * sample.n_rows / n_train)

    if variant == "ord_floor":
        m = fit_gmm(dsamp, k=k, seed=seed, encoding="ordinal", floor=0.25)
    elif variant == "ord_floor_r5":
        best = None
        for i in range(5):
            mi = fit_gmm(dsamp, k=k, seed=seeds.derive(seed, "r", i),
                         encoding="ordinal", floor=0.25)
            if best is None or mi.ll_history[-1] > best.ll_history[-1]:
                best = mi
        m = best
    elif variant.startswith("coarse"):
        cbins = int(variant.split("_")[1])
        disc_c = fit_discretizer(sample, n_bins=cbins, strategy="uniform")
        dsamp_c = apply_discretizer(disc_c, sample)
        m = fit_gmm(dsamp_c, k=k, seed=seed, encoding="onehot", floor=0.01)
        lab = predict(m, dsamp_c)
        chosen = smallest_clusters(m, lab, budget)
        fresh = model.sample(2000, seeds.derive(seed, "fresh"))
        fpts = np.column_stack([fresh.cols[0], fresh.cols[1]])
        fout = np.hypot(fpts[:, 0], fpts[:, 1]) > radius
        flab = predict(m, apply_discretizer(disc_c, fresh))
        cov = np.isin(flab[fout], chosen).mean() if fout.any() else 0.0
        sizes = np.bincount(lab, minlength=k)
        return cov, [int(sizes[c]) for c in chosen], budget
    else:
        raise ValueError(variant)

    lab = predict(m, dsamp)
    chosen = smallest_clusters(m, lab, budget)
    fresh = model.sample(2000, seeds.derive(seed, "fresh"))
    fpts = np.column_stack([fresh.cols[0], fresh.cols[1]])
    fout = np.hypot(fpts[:, 0], fpts[:, 1]) > radius
    flab = predict(m, apply_discretizer(disc, fresh))
    cov = np.isin(flab[fout], chosen).mean() if fout.any() else 0.0
    sizes = np.bincount(lab, minlength=k)
    return cov, [int(sizes[c]) for c in chosen], budget


def probe_2d():
    print("== 2d locator variants (k=10)")
    for variant in ["ord_floor", "ord_floor_r5", "coarse_20", "coarse_28"]:
        covs = []
        for seed in range(5):
            cov, csz, budget = locator_2d(variant, seed)
            covs.append(cov)
            if seed == 0:
                print(f" {variant} seed0: chosen={csz} budget={budget}")
        print(f" {variant}: cov={['%.2f' % c for c in covs]} "
              f"mean={np.mean(covs):.3f}")


if __name__ == "__main__":
    which = sys.argv[1] if len(sys.argv) > 1 else "all"
    if which in ("truth", "all"):
        probe_truth(1e-6)
        probe_truth(0.005)
    if which in ("metrics", "all"):
        probe_metrics()
    if which in ("locsynth", "all"):
        probe_locator_synth(0.005)
    if which in ("2d", "all"):
        probe_2d()
