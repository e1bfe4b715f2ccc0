#ifndef RPD_ERRORS_HPP
#define RPD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rpd {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class NonStochasticRow : public Error {
public:
    int row;
    double sum;
    NonStochasticRow(int row_, double sum_)
        : Error("row " + std::to_string(row_) + " sums to " + std::to_string(sum_) +
                ", expected 1 within 1e-12"),
          row(row_), sum(sum_) {}
};

class NegativeEntry : public Error {
public:
    int row, col;
    NegativeEntry(int row_, int col_)
        : Error("negative entry at (" + std::to_string(row_) + "," + std::to_string(col_) + ")"),
          row(row_), col(col_) {}
};

class MultipleClosedClasses : public Error {
public:
    explicit MultipleClosedClasses(int count)
        : Error("recurrent part is not irreducible: " + std::to_string(count) +
                " closed classes") {}
};

class SingularSystem : public Error {
public:
    explicit SingularSystem(const std::string& what) : Error(what) {}
};

class TransientStart : public Error {
public:
    explicit TransientStart(int state)
        : Error("state " + std::to_string(state) + " is transient") {}
};

class ThresholdTooLarge : public Error {
public:
    explicit ThresholdTooLarge(int section)
        : Error("support threshold empties section " + std::to_string(section)) {}
};

class EigSolverFailure : public Error {
public:
    explicit EigSolverFailure(const std::string& what) : Error(what) {}
};

class NoSuchEigenvalue : public Error {
public:
    explicit NoSuchEigenvalue(const std::string& what) : Error(what) {}
};

class DegenerateEigenvalue : public Error {
public:
    explicit DegenerateEigenvalue(const std::string& what) : Error(what) {}
};

class InconsistentEvidence : public Error {
public:
    explicit InconsistentEvidence(const std::string& what) : Error(what) {}
};

class ParameterOutOfRange : public Error {
public:
    explicit ParameterOutOfRange(const std::string& what) : Error(what) {}
};

class TooManyFailures : public Error {
public:
    int failed, total;
    TooManyFailures(int failed_, int total_)
        : Error(std::to_string(failed_) + " of " + std::to_string(total_) +
                " pull-back samples failed to converge"),
          failed(failed_), total(total_) {}
};

class AxiomViolation : public Error {
public:
    explicit AxiomViolation(const std::string& what) : Error(what) {}
};

class PartitionMismatch : public Error {
public:
    explicit PartitionMismatch(const std::string& what) : Error(what) {}
};

} // namespace rpd

#endif // RPD_ERRORS_HPP
