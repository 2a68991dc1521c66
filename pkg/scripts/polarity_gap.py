"""Show the smallest counterexample to the third coloring's polarity claim.

Prints, for the default catalog, the first set B for which neither choice of
v_B satisfies c(A u W^v u B) = c(A) and c(A u W^(1-v) u B) = 1 - c(A), along
with how many sets B fail per catalog instance.
"""

import json
import sys

from hindman_lab.claims import ClaimConfig, run_claim


def main(catalog: str = "builtin:default") -> int:
    rec = run_claim("c33", catalog, "s33-polarity", ClaimConfig())
    print(f"status: {rec['status']}")
    print("first counterexample:")
    print(json.dumps(rec["counterexample"], indent=2, sort_keys=True))
    for idx, inst in sorted(rec["data"]["instances"].items(), key=lambda kv: int(kv[0])):
        print(f"instance {idx}: {inst}")
    return 0


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
