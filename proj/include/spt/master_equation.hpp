#ifndef SPT_MASTER_EQUATION_HPP
#define SPT_MASTER_EQUATION_HPP

#include <cstddef>
#include <vector>

namespace spt {

// Exact stationary analysis of a finite continuous-time Markov chain given
// the off-diagonal rate matrix (rates[i][j] = rate of i -> j, i != j).
struct StationaryResult {
    // One distribution per closed communicating class, over the full state
    // index set (zero outside the class).
    std::vector<std::vector<double>> class_distributions;
    std::vector<std::vector<std::size_t>> recurrent_classes;
    bool disconnected = false;  // more than one closed class
};

StationaryResult master_equation_steady_state(const std::vector<std::vector<double>>& rates);

// Convenience for the ergodic case; throws ConfigError when the chain has
// several closed classes.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& rates);

}  // namespace spt

#endif
