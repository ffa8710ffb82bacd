from .validation import check_budget, check_instance, check_overflow, validate_instance

__all__ = ["check_budget", "check_instance", "check_overflow", "validate_instance"]
