#pragma once

#include <stdexcept>
#include <string>

namespace papsim {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class SchedulingInPast : public Error
{
public:
  using Error::Error;
};

class DoubleTransmit : public Error
{
public:
  using Error::Error;
};

class NonIntegralPayload : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  enum class Kind { UnknownKey, OutOfRange, MissingRequired, Malformed };

  ConfigError (Kind kind, std::string key, const std::string &detail = {})
    : Error (describe (kind, key, detail)), m_kind (kind), m_key (std::move (key))
  {}

  Kind kind () const { return m_kind; }
  const std::string &key () const { return m_key; }

private:
  static std::string describe (Kind kind, const std::string &key, const std::string &detail)
  {
    std::string what;
    switch (kind)
      {
      case Kind::UnknownKey: what = "UnknownKey"; break;
      case Kind::OutOfRange: what = "OutOfRange"; break;
      case Kind::MissingRequired: what = "MissingRequired"; break;
      case Kind::Malformed: what = "Malformed"; break;
      }
    what += "(\"" + key + "\")";
    if (!detail.empty ())
      what += ": " + detail;
    return what;
  }

  Kind m_kind;
  std::string m_key;
};

} // namespace papsim
