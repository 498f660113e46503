"""Print the integer homology of every corpus complex, its subdivision and a few Hawaiian stages."""

from dhomotopy.complexes import euler_characteristic, subdivide
from dhomotopy.corpus import complex_corpus, hawaiian_stage
from dhomotopy.homology import cellular_chain_complex, chain_complex, homology
from dhomotopy.verify import groups_str


def main():
    print(f"{'complex':<10} {'f-vector':<22} {'chi':>4}  H(K)                H(sd K)")
    for name, K in complex_corpus().items():
        print(f"{name:<10} {str(K.f_vector):<22} {euler_characteristic(K):>4}  "
              f"{groups_str(homology(K)):<19} {groups_str(homology(subdivide(K)))}")
    print()
    for k, n in [(1, 1), (4, 2), (10, 3)]:
        X = hawaiian_stage(k, n)
        cells = cellular_chain_complex(X).ranks
        print(f"wedge of {k} {n}-spheres: cells {cells}, H = {groups_str(homology(chain_complex(X)))}")


if __name__ == "__main__":
    main()
