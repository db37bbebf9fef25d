#pragma once

#include <vector>

namespace pdsc::agents {

// Table-backed Q-learning: Q(s,a) <- Q(s,a) + alpha (r + gamma max_a' Q(s',a') - Q(s,a)).
class TabularQ {
public:
    TabularQ(int states, int actions, double initial = 0.0);

    double q(int state, int action) const;
    void set(int state, int action, double value);
    double max_q(int state) const;
    int greedy(int state) const;

    // Returns the TD error used for the step.
    double update(int state, int action, double reward, int next_state, bool done, double alpha, double gamma);

    int states() const { return states_; }
    int actions() const { return actions_; }

private:
    int states_;
    int actions_;
    std::vector<double> table_;
};

}  // namespace pdsc::agents
