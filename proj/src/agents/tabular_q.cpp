#include "pdsc/agents/tabular_q.hpp"

#include <stdexcept>

namespace pdsc::agents {

TabularQ::TabularQ(int states, int actions, double initial)
    : states_(states), actions_(actions) {
    if (states < 1 || actions < 1) throw std::invalid_argument("TabularQ needs at least one state and action");
    table_.assign(static_cast<std::size_t>(states) * static_cast<std::size_t>(actions), initial);
}

double TabularQ::q(int state, int action) const {
    return table_.at(static_cast<std::size_t>(state) * static_cast<std::size_t>(actions_) + static_cast<std::size_t>(action));
}

void TabularQ::set(int state, int action, double value) {
    table_.at(static_cast<std::size_t>(state) * static_cast<std::size_t>(actions_) + static_cast<std::size_t>(action)) = value;
}

double TabularQ::max_q(int state) const { return q(state, greedy(state)); }

int TabularQ::greedy(int state) const {
    int best = 0;
    for (int a = 1; a < actions_; ++a) {
        if (q(state, a) > q(state, best)) best = a;
    }
    return best;
}

double TabularQ::update(int state, int action, double reward, int next_state, bool done, double alpha,
                        double gamma) {
    const double bootstrap = done ? 0.0 : gamma * max_q(next_state);
    const double td = reward + bootstrap - q(state, action);
    set(state, action, q(state, action) + alpha * td);
    return td;
}

}  // namespace pdsc::agents
