#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minilang/project.hpp"
#include "minilang/value.hpp"

namespace bsnap::minilang {

enum class TestStatus { Passed, Failed, Errored };

const char* test_status_name(TestStatus s);

struct TestOutcome {
    std::string test_id;
    TestStatus status = TestStatus::Passed;
    std::optional<std::string> detail;
    std::string captured_stdout;

    bool operator==(const TestOutcome&) const = default;
};

// Observer for client->library boundary calls. Entry fires before the callee
// body runs (receiver + args reflect pre-call state), exit after. Exceptions
// thrown by a sink abort the test with status=errored.
class ProbeSink {
  public:
    virtual ~ProbeSink() = default;
    // `receiver` is null for top-level functions and constructors.
    virtual uint64_t on_boundary_call(const std::string& method, const Value* receiver,
                                      const std::vector<Value>& args) = 0;
    // `is_throw` marks a MiniLang exception escaping the callee.
    virtual void on_boundary_return(uint64_t token, const Value& result,
                                    bool is_throw) = 0;
};

struct RunOptions {
    ProbeSink* sink = nullptr;
    // Also report library-internal calls to exported symbols.
    bool record_internal = false;
};

// Executes one test under a fresh interpreter state. Deterministic by
// construction: no clock, randomness, or I/O; print() goes to captured stdout.
TestOutcome run_test(const Project& project, const std::string& test_id,
                     const RunOptions& opts = {});

using ProbeFactory = std::function<ProbeSink*(const std::string& test_id)>;

// Runs every test in deterministic order (file path, then textual order).
// When a factory is given, it supplies one sink per test.
std::vector<TestOutcome> run_all_tests(const Project& project,
                                       const ProbeFactory& factory = nullptr,
                                       bool record_internal = false);

}  // namespace bsnap::minilang
