#include <activescalar/harness.hpp>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return asl::cli_run(args);
}
