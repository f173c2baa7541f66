#include "ssinfer/trajectory.hpp"

#include <stdexcept>

#include "ssinfer/csv.hpp"

namespace ssinfer {

void Trajectory::validate() const {
    const long n = times.size();
    if (latent.rows() != n || obs.size() != n)
        throw std::invalid_argument("Trajectory: times/latent/obs length mismatch");
    for (long i = 1; i < n; ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("Trajectory: times must be strictly increasing");
}

void Trajectory::write_csv(std::ostream& out) const {
    std::vector<std::string> header;
    header.push_back("time");
    for (long j = 0; j < latent.cols(); ++j) {
        header.push_back(j < static_cast<long>(state_names.size())
                             ? state_names[j]
                             : "state" + std::to_string(j));
    }
    header.push_back("obs");
    Eigen::MatrixXd rows(times.size(), latent.cols() + 2);
    rows.col(0) = times;
    rows.middleCols(1, latent.cols()) = latent;
    rows.col(latent.cols() + 1) = obs;
    ssinfer::write_csv(out, header, rows);
}

}  // namespace ssinfer
