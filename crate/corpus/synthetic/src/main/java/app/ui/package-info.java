/**
 * User interface widgets.
 */
package app.ui;
