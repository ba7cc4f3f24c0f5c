# Test suite package