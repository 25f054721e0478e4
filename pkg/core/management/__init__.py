"""
Management commands package
"""
