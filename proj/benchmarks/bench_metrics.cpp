#include <benchmark/benchmark.h>

#include <cstdio>
#include <set>

#include "citescan/citegraph.hpp"
#include "citescan/rng.hpp"

namespace {

using namespace citescan;

CitationNetwork random_network(int n_nodes, int n_edges, std::uint64_t seed) {
    Rng rng(seed);
    CitationNetwork net;
    net.dossier_ref = "bench";
    for (int i = 0; i < n_nodes; ++i) {
        NetworkNode node;
        char buf[16];
        std::snprintf(buf, sizeof buf, "n%06d", i);
        node.key = buf;
        node.cls = static_cast<NodeClass>(rng.below(4));
        node.kind = static_cast<PublicationKind>(rng.below(3));
        net.nodes.push_back(node);
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
    while (static_cast<int>(edges.size()) < n_edges) {
        auto a = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(n_nodes)));
        auto b = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(n_nodes)));
        if (a != b) edges.emplace(a, b);
    }
    net.edges.assign(edges.begin(), edges.end());
    return net;
}

void BM_ComputeMetrics(benchmark::State& state) {
    auto net = random_network(static_cast<int>(state.range(0)),
                              static_cast<int>(state.range(0)) * 4, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_metrics(net));
    }
}
BENCHMARK(BM_ComputeMetrics)->Arg(100)->Arg(1000)->Arg(10000);

}  // namespace
