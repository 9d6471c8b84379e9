/* Library tour: build nerve complexes from a small point set, reduce a
 * filtration to a decomposable graph, and push a point configuration through
 * a short structure-sampling chain. Build target: library_tour. */

#include <iostream>

#include "nerve/config.hpp"

int main() {
    using namespace nerve;

    /* nerve complexes of a five-point configuration in the unit disc */
    const std::vector<Point> V = nerve_demo_vertices();
    const SimplicialComplex A = alpha_complex(V, 0.5);
    const SimplicialComplex C = cech_complex(V, 0.7, static_cast<int>(V.size()));
    std::cout << "alpha(0.5) maximal simplices:  "
              << factorization_string(maximal_simplices(A)) << "\n";
    std::cout << "cech(0.7) maximal simplices:   "
              << factorization_string(maximal_simplices(C)) << "\n";

    /* filtration of a second configuration, reduced edge-by-edge to the
     * closest decomposable graph; the junction tree factorizes it */
    const Filtration F =
        build_filtration(trace_demo_vertices(), NerveClass{NerveKind::Cech, 2}, 2, 0.25);
    const LabeledGraph G = decomposable_from_filtration(F);
    const JunctionTree jt = junction_tree(G);
    std::cout << "reduced decomposable cliques:  " << factorization_string(jt.cliques) << "\n";
    std::cout << "junction tree separators:      " << factorization_string(jt.separators())
              << "\n";

    /* a short chain over point configurations under the uniform-ball prior;
     * every retained state is summarized by the induced clique structure */
    PointProcessPrior prior;
    prior.kind = PriorKind::UniformBall;
    prior.window = Window::UnitBall2;
    ProposalConfig proposal;
    proposal.eta = 0.02;
    proposal.w_local = 0.85;
    proposal.beta = 0.5;
    proposal.w_subset = {0.05, 0.0, 0.0, 0.0, 0.10};
    Rng rng(7);
    const ChainTrace trace =
        run_prior_chain(prior, 5, proposal, 4000, 1000, 3, NerveClass{NerveKind::Alpha, 2}, 0.35,
                        rng, StructureMode::GraphDecomposable);
    std::cout << "prior chain acceptance rate:   " << format_double(trace.v_acceptance_rate(), 4)
              << " (" << trace.samples.size() << " retained samples)\n";
    const auto tally = topology_tally(trace);
    const size_t top = std::min<size_t>(3, tally.size());
    for (size_t i = 0; i < top; ++i)
        std::cout << "  structure " << (i + 1) << ": " << tally[i].first << "  (frequency "
                  << format_double(tally[i].second, 3) << ")\n";
    return 0;
}
