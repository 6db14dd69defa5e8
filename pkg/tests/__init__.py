"""
Test package for grfold
"""
