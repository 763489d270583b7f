"""
Exception types for the volume potential project.

CustomException logs a detailed error message (file, line, message) when it is
constructed. ConfigError and NumericalError split failures into the two
classes the command line maps to exit codes 2 and 3.
"""

import os
import sys

from helmholtz_cubature.utils.logger import logger


def _origin_frame(error_detail: sys):
    """Return (file name, line) of the failure being reported."""
    _, _, exc_tb = error_detail.exc_info()
    if exc_tb is not None:
        while exc_tb.tb_next is not None:
            exc_tb = exc_tb.tb_next
        return exc_tb.tb_frame.f_code.co_filename, exc_tb.tb_lineno

    # Raised outside an except block: walk out of this module
    frame = error_detail._getframe(1)
    while frame is not None and frame.f_code.co_filename == __file__:
        frame = frame.f_back
    if frame is None:
        return "<unknown>", 0
    return frame.f_code.co_filename, frame.f_lineno


def error_message_detail(error, error_detail: sys):
    """
    Build a detailed error message including file name, line number,
    and original exception message.
    """
    file_name, line = _origin_frame(error_detail)

    try:
        relative_path = os.path.relpath(file_name, os.getcwd())
    except ValueError:
        relative_path = file_name

    return (
        f"Error in script: {relative_path}, "
        f"line: {line}, "
        f"message: {str(error)}"
    )


class CustomException(Exception):
    """
    Exception that logs an error with detailed location information
    as soon as it is created.
    """

    exit_code = 1

    def __init__(self, error_message, error_detail: sys = sys):
        super().__init__(error_message)
        self.message = str(error_message)
        self.error_message = error_message_detail(
            error_message, error_detail=error_detail
        )
        logger.error(self.error_message)

    def __str__(self):
        return self.error_message


class ConfigError(CustomException):
    """Invalid parameters, rules, points or configuration files."""

    exit_code = 2


class NumericalError(CustomException):
    """Non-finite values, non-convergence or missing samples during evaluation."""

    exit_code = 3
