"""
Utility functions for wkbwave
"""
