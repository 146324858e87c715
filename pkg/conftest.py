pytest_plugins = ['primecert.plugin', 'pytester']
