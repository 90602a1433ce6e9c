#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fjb
{
    /// Base of every error thrown by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// A distribution, topology or operation parameter is out of range.
    class InvalidSpec : public Error
    {
    public:
        using Error::Error;
    };

    /// An envelope or MGF was evaluated outside its admissible theta-domain.
    class DomainError : public Error
    {
    public:
        using Error::Error;
    };

    /// The stability condition fails at the requested theta.
    class InfeasibleTheta : public Error
    {
    public:
        InfeasibleTheta(const std::string& what, double slack) : Error(what), slack_(slack) {}

        /// rho_arrival(-theta) - rho_service(theta) at the rejected theta.
        double slack() const noexcept { return slack_; }

    private:
        double slack_;
    };

    /// No theta in the search interval yields a finite bound.
    class InfeasibleSystem : public Error
    {
    public:
        using Error::Error;
    };

    /// Exact oracle requested for an unstable queue (load >= 1).
    class Unstable : public Error
    {
    public:
        using Error::Error;
    };

    class InsufficientSamples : public Error
    {
    public:
        InsufficientSamples(const std::string& what, std::size_t required)
            : Error(what), required_(required)
        {
        }

        std::size_t required() const noexcept { return required_; }

    private:
        std::size_t required_;
    };

    /// Malformed input arrays (dimension mismatch, unsorted arrivals).
    class InvalidInput : public Error
    {
    public:
        using Error::Error;
    };

    /// Scenario configuration could not be parsed; carries the file and the JSON field path.
    class ConfigError : public Error
    {
    public:
        ConfigError(std::string path, std::string field, const std::string& message)
            : Error(path + ": " + field + ": " + message), path_(std::move(path)), field_(std::move(field))
        {
        }

        const std::string& path() const noexcept { return path_; }
        const std::string& field() const noexcept { return field_; }

    private:
        std::string path_;
        std::string field_;
    };
}
