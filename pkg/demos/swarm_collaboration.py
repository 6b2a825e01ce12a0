"""Compare collaboration regimes: shared archive vs isolation, 1 lab vs 3.

Run:  python3 demos/swarm_collaboration.py
"""

from agentrxiv.swarm import RunConfig, rounds_to_target, run_swarm

TARGET = 0.702 + 0.06


def describe(label: str, config: RunConfig) -> None:
    report = run_swarm(config)
    best = report.global_best_curve[-1]
    rounds = rounds_to_target(report, TARGET)
    cost = report.accounting["global"]["cost"]
    print(
        f"{label:<24} regime={report.regime:<10} papers={len(report.events):>3} "
        f"final_best={best:.4f} rounds_to_{TARGET:.3f}={rounds} cost=${cost}"
    )


def main() -> None:
    seed = 7
    describe("one lab, sharing", RunConfig(labs=1, papers_per_lab=40, seed=seed))
    describe(
        "one lab, isolated", RunConfig(labs=1, papers_per_lab=40, n_rxiv=0, seed=seed)
    )
    describe("three labs, sharing", RunConfig(labs=3, papers_per_lab=40, seed=seed))


if __name__ == "__main__":
    main()
