#include <iostream>
#include <string>
#include <vector>

#include <invar/cli.hpp>

int main(int argc, char **argv)
{
    const std::vector<std::string> args(argv, argv + argc);
    const auto result = invar::cli::run_command_line(args);
    std::cout << result.out;
    std::cerr << result.err;
    return result.exit_code;
}
