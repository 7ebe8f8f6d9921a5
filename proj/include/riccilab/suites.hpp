#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "riccilab/scenario.hpp"

namespace riccilab {

struct Check {
    std::string what;
    bool pass = true;
    double value = 0.0;
    double limit = 0.0;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string suite;
    std::string title;
    bool pass = true;
    std::vector<Check> checks;
    double seconds = 0.0;
    std::string error;  // set when the suite threw
};

/// Trajectories keyed by scenario hash, so suites sharing a run compute it once.
class RunCache {
public:
    explicit RunCache(Exec exec = Exec::parallel) : exec_(exec) {}
    const Trajectory& get(const ScenarioSpec& spec);
    std::size_t size() const { return runs_.size(); }

private:
    Exec exec_;
    std::map<std::uint64_t, Trajectory> runs_;
};

struct Suite {
    std::string name;
    int id = 0;
    std::string title;
    std::function<std::vector<Check>(RunCache&)> run;
};

const std::vector<Suite>& acceptance_suites();

/// Runs one named suite or "all". Throws UsageError for an unknown name.
std::vector<CriterionResult> run_verify(const std::string& which, const std::vector<Suite>& suites, RunCache& cache,
                                        std::ostream* progress = nullptr);

/// 0 if every criterion passed, 1 otherwise.
int verify_exit_code(const std::vector<CriterionResult>& results);

/// "PASS  [1] monotonicity  ..." on one line.
std::string result_line(const CriterionResult& r);
/// One indented line per check.
std::string result_details(const CriterionResult& r);

// Scenarios behind the suites.
ScenarioSpec flat_torus_scenario(int n = 128);
ScenarioSpec conformal_torus_scenario(int n = 128);
ScenarioSpec neck_scenario();
ScenarioSpec cigar_scenario();
ScenarioSpec flat_refinement_scenario(int n);

/// Smooth test 1-form used by the operator cross-check.
OneFormField bochner_test_form(const Grid2D& grid);

}  // namespace riccilab
