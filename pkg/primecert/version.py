"""__version__ is set when a release is tagged. Don't touch this file"""
__version__ = '0.1.0'
