#include <iostream>

#include "riccilab/exec.hpp"
#include "riccilab/suites.hpp"

int main(int argc, char** argv) {
    riccilab::configure_allocator();
    const std::string which = argc > 1 ? argv[1] : "all";
    riccilab::RunCache cache;
    const auto results = riccilab::run_verify(which, riccilab::acceptance_suites(), cache);
    for (const auto& r : results) std::cout << riccilab::result_line(r) << "\n";
    std::cout << "\n";
    for (const auto& r : results) std::cout << riccilab::result_line(r) << "\n" << riccilab::result_details(r);
    return riccilab::verify_exit_code(results);
}
