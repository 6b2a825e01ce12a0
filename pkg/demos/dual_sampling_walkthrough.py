"""Walk through the dual-sampling engine on a scripted provider.

One problem per decision path: agreement, confidence selection at high
similarity, meta-reassessment on divergence, and the no-answer fallback.

Run:  python3 demos/dual_sampling_walkthrough.py
"""

from agentrxiv.embedding import HashedEmbedding
from agentrxiv.sda import ScriptedProvider, evaluate_dataset

SHARED = "both samples reason along the same well trodden path " * 4

TABLE = {
    "integrate x squared from zero to three": {
        "precise": f"{SHARED}\n\\boxed{{9}}\nConfidence: 0.95",
        "creative": f"{SHARED}\n\\boxed{{9}}\nConfidence: 0.90",
    },
    "count the lattice points inside the circle": {
        "precise": f"{SHARED}\n\\boxed{{12}}\nConfidence: 0.60",
        "creative": f"{SHARED}\n\\boxed{{13}}\nConfidence: 0.85",
    },
    "sum the alternating harmonic series": {
        "precise": "a telescoping argument over partial sums gives\n"
        "\\boxed{\\ln 2}\nConfidence: 0.55",
        "creative": "numerically the terms drift toward seven tenths or so\n"
        "\\boxed{0.7}\nConfidence: 0.50",
        "meta": "the series converges to the natural logarithm of two\n"
        "\\boxed{\\ln 2}\nConfidence: 0.95",
    },
    "name the smallest uninteresting number": {
        "precise": "this question resists a definite value",
        "creative": "no final quantity can be stated here",
        "meta": "still no definite value",
    },
}

DATASET = [
    {"id": 1, "problem": "integrate x squared from zero to three", "answer": "9"},
    {"id": 2, "problem": "count the lattice points inside the circle", "answer": "13"},
    {"id": 3, "problem": "sum the alternating harmonic series", "answer": "\\ln 2"},
    {"id": 4, "problem": "name the smallest uninteresting number", "answer": "41"},
]


def main() -> None:
    report = evaluate_dataset(DATASET, ScriptedProvider(TABLE), HashedEmbedding())
    for outcome in report.outcomes:
        print(
            f"problem {outcome.problem_id}: path={outcome.path:<17} "
            f"answer={outcome.final_answer!r:<10} "
            f"similarity={outcome.similarity:.3f} tau={outcome.threshold_used:.3f} "
            f"correct={outcome.correct}"
        )
    print(f"\naccuracy {report.accuracy:.2f} ({report.correct}/{report.total})")
    print(f"paths {report.path_counts}")


if __name__ == "__main__":
    main()
