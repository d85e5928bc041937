// Fails the build when a worked example shipped in Part C disagrees with the
// rules engine.
#include <iostream>

#include "dmnprompt/prompt.hpp"

int main() {
  const auto& examples = dmnprompt::prompt::builtin_few_shot_examples();
  auto problems = dmnprompt::prompt::verify_few_shot_examples(examples);
  for (const auto& p : problems) std::cerr << "few-shot self-check: " << p << '\n';
  if (!problems.empty()) return 1;
  std::cout << "few-shot self-check: " << examples.size() << " worked examples agree with the rules engine\n";
  return 0;
}
