"""Independent reference computations used to freeze expected values for the tests."""
