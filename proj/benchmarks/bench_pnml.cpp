#include <benchmark/benchmark.h>

#include "dmnprompt/io.hpp"
#include "dmnprompt/pnml.hpp"

using namespace dmnprompt;

namespace {

// A sequence of `n` labelled tasks joined by places.
pnml::PetriNet chain(int n) {
  pnml::PetriNet net;
  for (int i = 0; i <= n; ++i) net.places.push_back({"p" + std::to_string(i), ""});
  for (int i = 0; i < n; ++i) {
    const auto t = "t" + std::to_string(i);
    pnml::Transition tr;
    tr.id = t;
    tr.label = "Task " + std::to_string(i);
    tr.kind = pnml::TransitionKind::task;
    net.transitions.push_back(tr);
    net.arcs.push_back({"p" + std::to_string(i), t});
    net.arcs.push_back({t, "p" + std::to_string(i + 1)});
  }
  net.initial_marking["p0"] = 1;
  return net;
}

}  // namespace

static void BM_ParsePnml(benchmark::State& state) {
  const auto text = read_file(DMNPROMPT_FIXTURES "/pnml/and_split_join.pnml");
  for (auto _ : state) benchmark::DoNotOptimize(pnml::parse_pnml(text));
}
BENCHMARK(BM_ParsePnml);

static void BM_NarrateChain(benchmark::State& state) {
  const auto net = chain(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pnml::net_to_text(net).to_text());
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NarrateChain)->RangeMultiplier(4)->Range(4, 1024)->Complexity();
