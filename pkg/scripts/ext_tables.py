"""Print the shifted-hom tables of the bundled algebras.

Rows scan every ordered pair of indecomposable projectives and simples;
only the nonzero spaces are shown.
"""

from heartglue.cli import load_corpus
from heartglue.derived import derived_hom
from heartglue.glue import default_window
from heartglue.reps import projective, simple


def label(kind, i):
    return f"{kind}{i}"


def main():
    corpus = load_corpus()
    for name in sorted(corpus):
        alg = corpus[name]
        w = default_window(alg, 2)
        objs = [(label("P", i), projective(alg, i))
                for i in range(1, alg.vertex_count + 1)]
        objs += [(label("S", i), simple(alg, i))
                 for i in range(1, alg.vertex_count + 1)]
        print(f"== {name} (window {w}) ==")
        for la, a in objs:
            for lb, b in objs:
                hits = []
                for n in range(-w, w + 1):
                    d = derived_hom(a, b, n)
                    if d:
                        hits.append(f"[{n}]: {d}")
                if hits:
                    print(f"  Hom({la}, {lb}) " + ", ".join(hits))
        print()


if __name__ == "__main__":
    main()
