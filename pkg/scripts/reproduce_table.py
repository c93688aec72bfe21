"""Print F and F1 for the four reference states next to the published three-decimal values."""

from entanglemetry.cli import round3, table_rows

PUBLISHED = {"W4": (0.646, 0.817), "GHZ4": (1.000, 1.000), "Cluster4": (1.095, 1.077), "HS": (1.148, 1.089)}


def main() -> None:
    print(f"{'state':<10}{'F':>12}{'F1':>12}{'pub F':>8}{'pub F1':>8}")
    for title, f, f1 in table_rows():
        pf, pf1 = PUBLISHED[title]
        flag = "" if (round3(f), round3(f1)) == (f"{pf:.3f}", f"{pf1:.3f}") else "  <- differs at 3 decimals"
        print(f"{title:<10}{f:>12.7f}{f1:>12.7f}{pf:>8.3f}{pf1:>8.3f}{flag}")


if __name__ == "__main__":
    main()
