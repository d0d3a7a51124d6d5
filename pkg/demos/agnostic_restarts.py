"""
Agnostic streams and dictionary restarts
========================================

When at most r tasks in the stream are outside the target class, shared
representations learned from them can poison later attempts.  The restart
driver watches the failure counter: more than K consecutive-epoch failures
cannot all be explained by an incomplete dictionary, so it wipes the
representation and rebuilds.  Restarts are bounded by r, scratch learns by
(r + 1)(K + 1), and a slack of sqrt(rKN/m) trades a few extra failures per
epoch for fewer wasted rebuilds.
"""

from probelearn import (StreamSpec, TreeFamily, combined_slack,
                        gen_agnostic_stream, run_protocol,
                        run_restart_protocol)

spec = StreamSpec(family="tree", n_features=12, k=2, d=3, s=7, m=40, r=4,
                  mf_depth=2, sample_size=10, placement="adversarial-interleaved",
                  seed=17).validate()
tasks, dictionary = gen_agnostic_stream(spec)
bad = [i for i, t in enumerate(tasks) if not t.good]
print(f"{spec.m} tasks over a {len(dictionary)}-metafeature dictionary, "
      f"{len(bad)} bad ones at positions {bad}")


def show(run, label):
    marks = run.restart_marks
    line = []
    for i, out in enumerate(run.outcomes):
        ch = {"lfd": ".", "scratch": "S"}.get(out, "?")
        if i > 0 and marks[i] != marks[i - 1]:
            ch = "|" + ch  # dictionary wiped before this task
        line.append(ch)
    print(f"\n{label}")
    print("  " + "".join(line))
    print(f"  restarts {run.restarts} (cap r = {spec.r}), "
          f"scratch {run.scratch_count} "
          f"(cap (r+1)(K+1) = {(spec.r + 1) * (spec.k + 1)}), "
          f"final dictionary size {run.rep_sizes[-1]}")


# no restarts: bad fragments, once absorbed, stay in the dictionary forever
family = TreeFamily(spec.d, spec.s)
show(run_protocol(family, tasks), "plain protocol (no wipes)")

# restart on more than K failures since the last wipe
family = TreeFamily(spec.d, spec.s)
show(run_restart_protocol(family, tasks, spec.k), "restart protocol, slack 0")

# slack lets an epoch survive a few bad-task failures without a wipe
slack = combined_slack(spec.r, spec.k, spec.n_features, spec.m)
family = TreeFamily(spec.d, spec.s)
show(run_restart_protocol(family, tasks, spec.k, slack=slack),
     f"restart protocol, slack {slack} = sqrt(rKN/m)")
