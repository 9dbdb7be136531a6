"""The five-qubit code: error conditions, circuits and recovery."""
