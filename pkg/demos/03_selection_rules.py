"""Compare the three operator-selection rules on a synthetic credit stream.

The controller turns recent operator impact into one credit number per
operator; the selection rule turns credits into the next choice:

* probability matching (PM) samples operators proportionally to credit,
  with a floor p_min that keeps every operator alive,
* winner-take-all (WTA) moves probability mass toward the single best
  operator at rate beta, pinning losers at p_min,
* the bandit rule (MAB) is deterministic: it plays the operator with the
  best upper-confidence score, so rarely-played operators get optimism
  bonuses instead of floor probability.

Run:  python demos/03_selection_rules.py
"""

import numpy as np

from aosat import (
    mab_scores,
    pm_probabilities,
    select_mab,
    select_pm,
    select_wta,
    update_utility,
)


def bar(p: float, width: int = 30) -> str:
    return "#" * round(p * width)


def main() -> None:
    credits = np.array([0.1, 0.4, 1.5, 0.4])
    names = ["op A", "op B", "op C", "op D"]
    print(f"credits: {dict(zip(names, credits.tolist()))}")

    print("\nProbability matching (p_min = 0.05):")
    for name, p in zip(names, pm_probabilities(credits, 0.05)):
        print(f"  {name}: {p:.3f} {bar(p)}")

    rng = np.random.default_rng(0)
    draws = np.bincount(
        [select_pm(credits, 0.05, rng) for _ in range(10_000)], minlength=4
    )
    print(f"  10000 draws: {dict(zip(names, draws.tolist()))}")

    print("\nWinner-take-all (beta = 0.8, p_min = 0.05), starting uniform:")
    probs = np.full(4, 0.25)
    for step in range(1, 6):
        _, probs = select_wta(probs, credits, 0.8, 0.05, rng)
        shown = " ".join(f"{p:.3f}" for p in probs)
        print(f"  step {step}: [{shown}]")
    print("  op C is pulled to p_max = 1 - 3*p_min = 0.85; the rest sit at 0.05.")

    print("\nBandit rule on three simulated arms (true rates 0.2/0.5/0.8):")
    true_rates = np.array([0.2, 0.5, 0.8])
    utilities = np.zeros(3)
    counts = np.zeros(3, dtype=int)
    for _ in range(300):
        arm = select_mab(utilities, counts, 1.0)
        reward = float(rng.random() < true_rates[arm])
        counts[arm] += 1
        # Running-mean utility, the "alpha=mean" update used by the engine.
        utilities[arm] = update_utility(utilities[arm], reward, 1.0 / counts[arm])
    print(f"  plays after 300 rounds: {counts.tolist()} "
          f"(the 0.8 arm gets the lion's share)")
    scores = mab_scores(utilities, counts, 1.0)
    print("  final upper-confidence scores: "
          + " ".join(f"{s:.3f}" for s in scores))
    print(f"  C=0 would mean pure exploitation: argmax utility = arm "
          f"{int(np.argmax(utilities))}")


if __name__ == "__main__":
    main()
