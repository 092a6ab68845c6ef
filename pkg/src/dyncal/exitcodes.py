# The program return values corresponding to success, an unexpected failure, invalid input, a numerical failure, and an I/O failure, respectively.
GOOD = 0
UNKNOWN_ERROR = 1
INVALID_INPUT = 2
NUMERICAL_FAILURE = 3
IO_FAILURE = 4
